from .models import Grid, GridPoints, Sector