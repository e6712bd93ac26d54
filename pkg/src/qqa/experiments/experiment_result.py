'''
Module holding ExperimentResult class
'''
import os
import json
from collections import UserDict

import pandas as pnd

from dmu.logging.log_store import LogStore

log=LogStore.add_logger('qqa:experiments:experiment_result')

SCHEMA_VERSION = 1
FLOAT_FORMAT   = '%.10e'
# ------------------------------------
class ExperimentResult(UserDict):
    '''
    Class meant to hold the outcome of an experiment, with keys:

    config  : Echo of the configuration used
    columns : Names of the row fields, in output order
    rows    : List of dictionaries, one per output row
    metadata: Package version, seed, wall time, schema version
    '''
    _l_key = ['config', 'columns', 'rows', 'metadata']
    # ----------------------------------
    def __setitem__(self, name : str, value):
        '''
        Takes the name of the field and its value
        '''
        if name not in self._l_key:
            raise ValueError(f'Invalid key {name}, expected one of {self._l_key}')

        log.debug(f'Setting {name}')

        super().__setitem__(name, value)
    # ----------------------------------
    def __getitem__(self, name : str):
        '''
        Takes name of field, returns its value
        '''
        if name not in self.data:
            raise ValueError(f'Field {name} not found')

        return super().__getitem__(name)
    # ----------------------------------
    def add_row(self, row : dict) -> None:
        '''
        Appends row, checking that it has the declared columns
        '''
        l_col = self['columns']
        if set(row) != set(l_col):
            raise ValueError(f'Row with keys {sorted(row)} does not match columns {sorted(l_col)}')

        self.data.setdefault('rows', []).append(row)
    # ----------------------------------
    def to_dataframe(self) -> pnd.DataFrame:
        '''
        Rows as a dataframe with columns in declared order
        '''
        return pnd.DataFrame(self.data.get('rows', []), columns=self['columns'])
    # ----------------------------------
    def to_csv(self, path : str) -> None:
        '''
        Saves rows to CSV, floats with a fixed format
        '''
        dir_path = os.path.dirname(path)
        os.makedirs(dir_path, exist_ok=True)

        df = self.to_dataframe()
        df.to_csv(path, index=False, float_format=FLOAT_FORMAT, encoding='utf-8', lineterminator='\n')
        log.info(f'Saved rows to: {path}')
    # ----------------------------------
    def to_json(self, path : str) -> None:
        '''
        Will save current object to JSON, using the path as argument
        '''
        dir_path = os.path.dirname(path)
        os.makedirs(dir_path, exist_ok=True)

        with open(path, 'w', encoding='utf-8') as ofile:
            json.dump(self.data, ofile, indent=4, sort_keys=True)

        log.info(f'Saved result to: {path}')
    # ----------------------------------
    def __str__(self) -> str:
        val = ''
        for key in ['config', 'metadata']:
            for name, value in self.data.get(key, {}).items():
                val += f'{name:<40}{value}\n'

        val += f'{"rows":<40}{len(self.data.get("rows", []))}\n'

        return val
    # ----------------------------------
    @staticmethod
    def from_json(path : str) -> 'ExperimentResult':
        '''
        Will take a path to a JSON file and return an ExperimentResult instance
        '''
        if not os.path.isfile(path):
            raise FileNotFoundError(f'Cannot find: {path}')

        with open(path, encoding='utf-8') as ifile:
            data = json.load(ifile)

        return ExperimentResult(data)
# ------------------------------------
