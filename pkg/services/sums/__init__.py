from .models import SumReport