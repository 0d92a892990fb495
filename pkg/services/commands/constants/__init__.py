from .ConstantsCommand import ConstantsCommand