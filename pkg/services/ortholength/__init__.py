from .models import OrthoEntry, OrthoSpectrum, Prop71Report