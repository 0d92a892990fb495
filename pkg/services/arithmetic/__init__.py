from .AlgInt import AlgInt
from .EulerPhiSieve import EulerPhiSieve