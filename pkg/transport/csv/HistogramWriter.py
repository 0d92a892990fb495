import logging
import os
from typing import Dict, List, Tuple

import numpy as np

from config import SIGNIFICANT_DIGITS
from services.correlation.models import AtomMeasure1D, GeometryKind, Hist1D, Hist2D, HistGeometry
from services.errors import ConfigError
from services.ortholength.models import OrthoSpectrum

logger = logging.getLogger(__name__)

FLOAT_FORMAT = f"%.{SIGNIFICANT_DIGITS}g"

PLANE_HEADER = "re_lo,re_hi,im_lo,im_hi,mass,density_midpoint"
POLAR_HEADER = "r_lo,r_hi,theta_lo,theta_hi,mass,density_midpoint"
HIST1D_HEADER = "t,mass"
ATOMS_HEADER = "num,den,mass_num,mass_den"
SPECTRUM_HEADER = "norm,length,multiplicity_numerator,unit_count"


class HistogramWriter:
    """
    Запись и чтение CSV-артефактов.

    Формат: строки комментариев ``# key=value`` с полной конфигурацией,
    строка заголовка, далее по строке на бин (или атом). Вещественные
    числа пишутся с 17 значащими цифрами независимо от локали, поэтому
    чтение возвращает те же double.
    """

    def __init__(self, meta: Dict[str, str] = None):
        self.meta = dict(meta or {})

    def _open(self, path: str, meta: Dict[str, str], header: str):
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        f = open(path, "w", encoding="utf-8", newline="\n")
        for key, value in sorted({**self.meta, **meta}.items()):
            f.write(f"# {key}={value}\n")
        f.write(header + "\n")
        return f

    #region Двумерные гистограммы

    def write_hist2d(self, hist: Hist2D, path: str) -> None:
        g = hist.geometry
        e1, e2 = g.edges()
        lo1, lo2 = np.meshgrid(e1[:-1], e2[:-1], indexing="ij")
        hi1, hi2 = np.meshgrid(e1[1:], e2[1:], indexing="ij")
        table = np.column_stack([
            lo1.ravel(), hi1.ravel(), lo2.ravel(), hi2.ravel(),
            hist.masses.ravel(), hist.densities().ravel(),
        ])
        meta = {
            **hist.meta,
            **g.describe(),
            "total_raw_mass": str(hist.total_raw_mass),
            "renormalizer": repr(hist.renormalizer),
            "diagonal_included": str(hist.diagonal_included).lower(),
        }
        header = POLAR_HEADER if g.kind == GeometryKind.POLAR else PLANE_HEADER
        with self._open(path, meta, header) as f:
            np.savetxt(f, table, fmt=FLOAT_FORMAT, delimiter=",")
        logger.info(f"[HistogramWriter] {g.size} бинов записано в {path}")

    @staticmethod
    def read_lines(path: str) -> Tuple[Dict[str, str], str, List[str]]:
        if not os.path.exists(path):
            raise ConfigError(f"Файл {path} не найден")
        meta, header, rows = {}, None, []
        with open(path, "r", encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    key, _, value = line[1:].strip().partition("=")
                    meta[key] = value
                elif header is None:
                    header = line
                else:
                    rows.append(line)
        if header is None:
            raise ConfigError(f"В файле {path} нет заголовка")
        return meta, header, rows

    @staticmethod
    def read_hist2d(path: str) -> Hist2D:
        meta, header, rows = HistogramWriter.read_lines(path)
        if header not in (PLANE_HEADER, POLAR_HEADER):
            raise ConfigError(f"{path}: неожиданный заголовок '{header}'")
        try:
            geometry = HistGeometry(
                kind=GeometryKind(meta["geometry"]),
                extent=float(meta["extent"]),
                n1=int(meta["n1"]),
                n2=int(meta["n2"]),
                im_scale=float(meta.get("im_scale", "1.0")),
            )
        except KeyError as e:
            raise ConfigError(f"{path}: нет ключа {e} в комментариях")
        table = np.loadtxt(rows, delimiter=",", ndmin=2) if rows else np.zeros((0, 6))
        if table.shape[0] != geometry.size:
            raise ConfigError(f"{path}: {table.shape[0]} строк вместо {geometry.size}")
        return Hist2D(
            geometry=geometry,
            masses=table[:, 4].reshape(geometry.shape),
            total_raw_mass=int(meta.get("total_raw_mass", "0")),
            renormalizer=float(meta.get("renormalizer", "1.0")),
            diagonal_included=meta.get("diagonal_included") == "true",
            meta=meta,
        )

    #endregion

    #region Одномерные данные

    def write_hist1d(self, hist: Hist1D, path: str) -> None:
        centres = (hist.edges[:-1] + hist.edges[1:]) / 2
        meta = {
            **hist.meta,
            "t_min": repr(float(hist.edges[0])),
            "t_max": repr(float(hist.edges[-1])),
            "bins": str(len(hist.masses)),
            "total_mass": repr(hist.total_mass),
        }
        with self._open(path, meta, HIST1D_HEADER) as f:
            np.savetxt(f, np.column_stack([centres, hist.masses]), fmt=FLOAT_FORMAT, delimiter=",")

    @staticmethod
    def read_hist1d(path: str) -> Hist1D:
        meta, header, rows = HistogramWriter.read_lines(path)
        if header != HIST1D_HEADER:
            raise ConfigError(f"{path}: неожиданный заголовок '{header}'")
        table = np.loadtxt(rows, delimiter=",", ndmin=2)
        edges = np.linspace(float(meta["t_min"]), float(meta["t_max"]), int(meta["bins"]) + 1)
        return Hist1D(edges=edges, masses=table[:, 1], total_mass=float(meta.get("total_mass", "0")), meta=meta)

    def write_atoms(self, measure: AtomMeasure1D, path: str) -> None:
        """Точные атомы: ключ n′/n и масса как несократимые дроби."""
        with self._open(path, {"atoms": str(len(measure.atoms))}, ATOMS_HEADER) as f:
            for key, mass in measure.sorted_items():
                f.write(f"{key.numerator},{key.denominator},{mass.numerator},{mass.denominator}\n")

    def write_spectrum(self, spec: OrthoSpectrum, path: str) -> None:
        meta = {
            "field": str(spec.discriminant),
            "ideal": f"{spec.generator[0]},{spec.generator[1]}",
            "N": str(spec.horizon),
        }
        with self._open(path, meta, SPECTRUM_HEADER) as f:
            for e in spec.entries:
                f.write(f"{e.norm},{FLOAT_FORMAT % e.length},{e.numerator},{spec.unit_count}\n")

    #endregion
