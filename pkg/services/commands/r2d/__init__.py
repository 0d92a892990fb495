from .R2dCommand import R2dCommand