'''
Source root: the library lives in the ``sedf`` package.
'''
