from .PairHistogrammer import PairHistogrammer