from .EmpiricalCommand import EmpiricalCommand