'''
Mother class for the search and classification engines.

'''
from typing import Dict


class Engine(object):
    '''
    An algorithm configured by a parameter dictionary.
    '''

    def __init__(self, params: Dict = None):
        '''
        Constructor
        @param params: the parameters of the engine as a dictionary.
               Implementations read every knob with a default value.
        '''
        self.params = dict(params or {})

    def merged_params(self, params: Dict = None) -> Dict:
        '''
        Parameters for one run: the run's own parameters override the
        constructor ones
        '''
        return {**self.params, **(params or {})}

    def run(self, *args, params: Dict = None):
        '''
        Runs the engine.
        Implementation should provide default values for every parameter
        (the function will be evaluated with an empty dictionary).
        '''
        raise NotImplementedError
