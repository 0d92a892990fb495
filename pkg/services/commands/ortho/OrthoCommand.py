import logging
from typing import Any, Dict

from services.commands.BaseCommand import BaseCommand
from services.commands.models import RunConfig
from services.correlation.compare import compare_1d
from services.correlation.densities import density_real
from services.ortholength.spectrum import ortho_histogram, ortho_pair_measure, ortho_spectrum, verify_prop71
from transport.json.SummaryWriter import RunSummary

logger = logging.getLogger(__name__)


class OrthoCommand(BaseCommand):
    """Спектр ортодлин, гистограмма меры пар и проверка тождества с образом 2Re."""

    def execute(self, config: RunConfig) -> Dict[str, Any]:
        field = config.number_field()
        b = config.ideal_generator()
        spec = ortho_spectrum(field, b, config.N)
        hist = ortho_histogram(spec, config.half_width, config.bins)
        if config.out:
            writer = self.writer(config)
            writer.write_atoms(ortho_pair_measure(spec), config.out)
            writer.write_spectrum(spec, self.sibling(config.out, "spectrum"))
            writer.write_hist1d(hist, self.sibling(config.out, "hist"))

        report = compare_1d(hist, lambda s: density_real(s, "ortho"), config.quadrature_rule())
        extra: Dict[str, Any] = {"lengths": len(spec.entries)}
        if config.verify:
            extra["identity"] = verify_prop71(field, b, config.N).model_dump(mode="json")

        summary = RunSummary(command=config.command, config=config.echo(), metrics=report, extra=extra)
        return self.finish(config, summary)
