from .SummaryWriter import RunSummary, SummaryWriter