from .HistogramWriter import HistogramWriter