"""Default parameters and per-dataset presets."""

# --------------- graph construction -----------------
DEFAULT_OMEGA                = 3
DEFAULT_BANDWIDTH            = 1.0
DEFAULT_MAX_BOUNDARY_PAIRS   = 10
DEFAULT_CENTROID_RANGE       = (-10.0, 0.0)
DEFAULT_BOUNDARY_RANGE       = (-0.01, 0.0)
# smallest negative magnitude, as a fraction of |wMin|
MIN_NEGATIVE_FRACTION        = 1e-3
NEGATIVE_WEIGHT_CONVENTIONS  = ('proportional', 'inverse')

# --------------- spectral -----------------
DEFAULT_EPSILON              = 1e-6
DEFAULT_BLOCK_SIZE           = 30
POWER_ITERATION_TOL          = 1e-10
POWER_ITERATION_MAX_ITER     = 10000
SYMMETRY_TOL                 = 1e-10
INERTIA_ZERO_TOL             = 1e-8
# Schur complements above DENSE_FACTOR * r rows stay sparse
DENSE_FACTOR                 = 4
MARGIN_RULES                 = ('fixed', 'lookahead')
# margin used when a graph config builds the classifier's perturbation
DEFAULT_MARGIN               = 'lookahead'
# relative width at which the lookahead margin search stops
LOOKAHEAD_RTOL               = 1e-4
BOUND_SOURCES                = ('eval_bound', 'oracle', 'simple', 'gershgorin')

# --------------- solver -----------------
DEFAULT_MU1                  = 0.01
DEFAULT_MU2                  = 0.0
DEFAULT_IRLS_EPSILON         = 1e-4
DEFAULT_MAX_OUTER_ITER       = 50
DEFAULT_OUTER_TOL            = 1e-6
DEFAULT_CG_TOL               = 1e-10
DEFAULT_CG_MAX_ITER          = 1000
DEFAULT_BETA_SCHEDULE        = (1.0, 0.75, 0.5, 0.25, 0.0)
DEFAULT_REJECT_TARGET        = 0.095

# --------------- harness -----------------
DEFAULT_TRAIN_FRACTION       = 0.7
DEFAULT_TRIALS               = 100
DEFAULT_NOISE_RATES          = (0.0, 0.1, 0.2)
RESULT_COLUMNS               = ['method', 'noise_rate', 'trial', 'error_rate', 'rejection_rate']
BOUND_COLUMNS                = ['trial', 'r', 'lambda_min_oracle', 'eval_bound', 'simple_bound', 'gershgorin_bound']
CSV_FLOAT_FORMAT             = '%.10g'

# Per-dataset presets. tau is the range the threshold was tuned within.
# The tables name their parameters (gamma, sigma0, sigma1, tau) while the
# objective uses (mu1, mu2, tau). The mapping sigma0 -> mu1, sigma1 -> mu2 is
# a guess; both namings are kept so the guess can be revisited.
DATASET_PRESETS = {
    'phoneme': {
        'centroid_weight_range': (-10.0, 0.0),
        'boundary_weight_range': (-0.01, 0.0),
        'sample_size': 300,
        'table_params': {'gamma': 1.0, 'sigma0': 1.0, 'sigma1': 1.0, 'tau': (0.0115, 0.027)},
        'mu1': 1.0, 'mu2': 1.0, 'tau': (0.0115, 0.027),
    },
    'banana': {
        'centroid_weight_range': (-20.0, 0.0),
        'boundary_weight_range': (-0.01, 0.0),
        'sample_size': 300,
        'table_params': {'gamma': 1.0, 'sigma0': 0.1, 'sigma1': 1.0, 'tau': (0.000055, 0.00035)},
        'mu1': 0.1, 'mu2': 1.0, 'tau': (0.000055, 0.00035),
    },
    'gender': {
        'centroid_weight_range': (-1.0, 0.0),
        'boundary_weight_range': (-0.01, 0.0),
        'sample_size': 400,
        'table_params': {'gamma': 1.0, 'sigma0': 0.1, 'sigma1': 2.0, 'tau': (0.0095, 0.025)},
        'mu1': 0.1, 'mu2': 2.0, 'tau': (0.0095, 0.025),
    },
    'sonar': {
        'centroid_weight_range': (-1.0, 0.0),
        'boundary_weight_range': (-0.1, 0.0),
        'sample_size': 210,
        'mu1': 0.01, 'mu2': 0.0, 'tau': (0.0, 0.0),
    },
}

PRESET_NAMES = tuple(DATASET_PRESETS)
