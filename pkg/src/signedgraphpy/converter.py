import pandas as pd
from .constants import RESULT_COLUMNS, CSV_FLOAT_FORMAT

_SUMMARY_COLUMNS = ['method', 'noise_rate', 'trials', 'failed', 'error_mean', 'error_std',
					'rejection_mean', 'rejection_std']

class ResultsConverter:
	"""
	Converts experiment results to pandas DataFrames and files.

	This class provides static methods for turning trial results and solver
	output into tables ready for CSV/JSON export.

	Methods:
		trials_to_frame: One row per trial
		summarize: Mean/std per method and noise rate
		signal_to_dict: Solver output as a JSON-ready dict
		write_csv: Byte-stable CSV export
	"""
	@staticmethod
	def trials_to_frame(results, columns=None):
		"""
		Converts trial results to a DataFrame.

		Parameters:
			results (iterable of TrialResult): Trial results in run order
			columns (list): Columns to keep. Defaults to method, noise_rate, trial, error_rate, rejection_rate.

		Returns:
			pandas.DataFrame: One row per trial, failed trials carry NaN rates
		"""
		columns = columns or RESULT_COLUMNS
		records = [r.to_dict() for r in results]
		if not records:
			return pd.DataFrame(columns=columns)
		return pd.DataFrame.from_records(records)[columns]

	@staticmethod
	def summarize(results):
		"""
		Aggregates trial results per (method, noise_rate).

		Returns:
			pandas.DataFrame: trials, failed, error_mean, error_std, rejection_mean, rejection_std
		"""
		frame = ResultsConverter.trials_to_frame(results, RESULT_COLUMNS + ['error'])
		if frame.empty:
			return pd.DataFrame(columns=_SUMMARY_COLUMNS)
		frame['failed'] = frame['error'].notna()
		grouped = frame.groupby(['method', 'noise_rate'], sort=False)
		summary = grouped.agg(
			trials=('trial', 'count'),
			failed=('failed', 'sum'),
			error_mean=('error_rate', 'mean'),
			error_std=('error_rate', 'std'),
			rejection_mean=('rejection_rate', 'mean'),
			rejection_std=('rejection_rate', 'std'),
		).reset_index()
		summary['failed'] = summary['failed'].astype(int)
		return summary[_SUMMARY_COLUMNS]

	@staticmethod
	def signal_to_dict(signal, config=None):
		return signal.to_dict(config=config)

	@staticmethod
	def write_csv(frame, path):
		frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator='\n')
