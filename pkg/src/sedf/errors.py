'''
Exceptions raised by the library.

Every error is a ValueError so callers that only care about "bad input"
can catch one thing.
'''


class SedfError(ValueError):
    '''
    Base class of all the library errors
    '''


class InvalidOrderError(SedfError):
    '''
    A group constructor was given an order it cannot build
    '''


class InvalidPresentationError(SedfError):
    '''
    Semidirect product parameters do not describe a group
    '''


class CayleyTableError(SedfError):
    '''
    Malformed Cayley table text or table contents
    '''


class IdentityPlacementError(CayleyTableError):
    '''
    Element 0 does not act as the identity
    '''


class LatinSquareError(CayleyTableError):
    '''
    Some row or column of the table is not a permutation
    '''


class AssociativityError(CayleyTableError):
    '''
    The table fails (a.b).c = a.(b.c) for some triple
    '''


class FieldError(SedfError):
    '''
    Invalid finite field or cyclotomy request
    '''


class DisjointnessError(SedfError):
    '''
    Blocks (or difference operands) share an element
    '''


class ShapeError(SedfError):
    '''
    Block sizes or block count do not match what was asked
    '''


class GroupMismatchError(SedfError):
    '''
    Objects living in different groups were combined
    '''


class PreconditionError(SedfError):
    '''
    An operation was called outside its domain
    '''


class ParameterError(SedfError):
    '''
    Parameters are not admissible or not of the required form
    '''


class GroupSpecError(SedfError):
    '''
    A group spec string could not be understood
    '''


class FamilyFormatError(SedfError):
    '''
    A serialized block family could not be read
    '''


class ConstructionError(SedfError):
    '''
    A construction produced a family that failed its own verifier
    '''
