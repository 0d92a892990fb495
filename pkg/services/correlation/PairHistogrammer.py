import logging
import math
from multiprocessing import Pool
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from config import PAIR_BATCH_PAIRS, PAIR_CHUNK_ROWS, WINDOW_SLACK, WORKERS
from services.correlation.models import (
    GeometryKind,
    Hist2D,
    HistGeometry,
    RenormSpec,
    ScalingSpec,
    WeightedLogSet,
)
from services.errors import ComputationFailure, ValidationFailure, WindowTooLarge
from services.lattices.grid import enumerate_disk, lattice_of

logger = logging.getLogger(__name__)

# граница точного суммирования целых в float64
EXACT_FLOAT = 1 << 52

PairAtom = Tuple[int, int, float, float, int]


def wrap_angle(d: np.ndarray) -> np.ndarray:
    """Разность аргументов из (−2π, 2π) в [−π, π)."""
    return np.where(d >= math.pi, d - 2 * math.pi, np.where(d < -math.pi, d + 2 * math.pi, d))


def _positions(ctx: Dict, xi: np.ndarray, yi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    psi = ctx["psi"]
    re = psi * (ctx["shape_re"][yi] - ctx["shape_re"][xi])
    im = psi * wrap_angle(ctx["arg"][yi] - ctx["arg"][xi])
    return re, im


def _deposit(ctx: Dict, idx: np.ndarray, products: Optional[np.ndarray]) -> np.ndarray:
    size = ctx["geometry"].size
    keep = idx >= 0
    if products is None:
        return np.bincount(idx[keep], minlength=size).astype(np.int64)
    sums = np.bincount(idx[keep], weights=products[keep].astype(np.float64), minlength=size)
    return np.rint(sums).astype(np.int64)


def _naive_block(ctx: Dict, start: int, stop: int) -> np.ndarray:
    """Все пары с первой точкой из строк [start, stop)."""
    geometry: HistGeometry = ctx["geometry"]
    shape_re, arg, weights = ctx["shape_re"], ctx["arg"], ctx["weights"]
    psi = ctx["psi"]
    acc = np.zeros(geometry.size, dtype=np.int64)
    step = ctx["chunk_rows"]
    for i0 in range(start, stop, step):
        i1 = min(i0 + step, stop)
        re = psi * (shape_re[None, :] - shape_re[i0:i1, None])
        im = psi * wrap_angle(arg[None, :] - arg[i0:i1, None])
        idx = geometry.locate(re, im)
        if not ctx["diagonal"]:
            rows = np.arange(i1 - i0)
            idx[rows, rows + i0] = -1
        products = None if ctx["unit"] else weights[i0:i1, None] * weights[None, :]
        acc += _deposit(ctx, idx, products)
        logger.debug(f"[PairHistogrammer] строки {i0}..{i1} из {stop}")
    return acc


def _windowed_pairs(ctx: Dict, offsets: np.ndarray) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """
    Пары (x, y = x + p) для смещений p, где |x| ≥ |p| / c.

    Точки отсортированы по модулю, поэтому кандидаты x образуют хвост массива.
    """
    coords = ctx["coords"]
    order, sorted_mod = ctx["order"], ctx["sorted_mod"]
    lookup, lo = ctx["lookup"], ctx["box_lo"]
    c = ctx["growth"]
    batch_x, batch_y, filled = [], [], 0
    for dm, dn, modulus in offsets:
        start = np.searchsorted(sorted_mod, modulus / c * (1 - WINDOW_SLACK), side="left")
        xs = order[start:]
        if xs.size == 0:
            continue
        m = coords[xs, 0] + int(dm) - lo[0]
        n = coords[xs, 1] + int(dn) - lo[1]
        inside = (m >= 0) & (m < lookup.shape[0]) & (n >= 0) & (n < lookup.shape[1])
        ys = np.full(xs.size, -1, dtype=np.int64)
        ys[inside] = lookup[m[inside], n[inside]]
        found = ys >= 0
        batch_x.append(xs[found])
        batch_y.append(ys[found])
        filled += int(found.sum())
        if filled >= ctx["batch_pairs"]:
            yield np.concatenate(batch_x), np.concatenate(batch_y)
            batch_x, batch_y, filled = [], [], 0
    if filled:
        yield np.concatenate(batch_x), np.concatenate(batch_y)


def _windowed_block(ctx: Dict, offsets: np.ndarray) -> np.ndarray:
    geometry: HistGeometry = ctx["geometry"]
    acc = np.zeros(geometry.size, dtype=np.int64)
    weights = ctx["weights"]
    for xi, yi in _windowed_pairs(ctx, offsets):
        idx = geometry.locate(*_positions(ctx, xi, yi))
        products = None if ctx["unit"] else weights[xi] * weights[yi]
        acc += _deposit(ctx, idx, products)
    return acc


def _run_task(task: Tuple[str, Dict, object]) -> np.ndarray:
    kind, ctx, part = task
    if kind == "naive":
        return _naive_block(ctx, *part)
    return _windowed_block(ctx, part)


class PairHistogrammer:
    """
    Бинирование меры пар Σ ω(x)ω(y) Δ_{ψ(N)(log y − log x)}.

    Два прохода дают побитно одинаковый результат: naive перебирает все
    упорядоченные пары блоками строк, windowed перебирает только пары с разностью
    p = y − x, для которых образ может попасть в окно.
    """

    def __init__(
        self,
        logset: WeightedLogSet,
        scaling: ScalingSpec,
        geometry: HistGeometry,
        renorm: Optional[RenormSpec] = None,
        diagonal_included: bool = False,
        workers: int = WORKERS,
    ):
        self.logset = logset
        self.scaling = scaling
        self.psi = scaling.psi(logset.N)
        self.renorm = renorm or RenormSpec.default_for(scaling.regime, logset.weight_kind)
        self.diagonal_included = diagonal_included
        self.workers = max(1, int(workers))
        self.geometry = self._fit_geometry(geometry)

    def _fit_geometry(self, geometry: HistGeometry) -> HistGeometry:
        if geometry.kind == GeometryKind.CYLINDER:
            return geometry.model_copy(update={"im_scale": self.psi})
        if geometry.extent > math.pi * self.psi:
            raise WindowTooLarge(
                f"Окно A={geometry.extent} не вкладывается в цилиндр: A > π·ψ(N) = {math.pi * self.psi:.6g}"
            )
        return geometry

    def _context(self) -> Dict:
        s = self.logset
        wmax = int(s.weights.max()) if len(s) else 1
        unit = bool(np.all(s.weights == 1))
        if not unit and wmax * wmax >= EXACT_FLOAT:
            raise ComputationFailure("Веса слишком велики для точного накопления")
        M = max(len(s), 1)
        per_pair = 1 if unit else wmax * wmax
        return {
            "geometry": self.geometry,
            "shape_re": s.shape_re,
            "arg": s.log_im,
            "weights": s.weights,
            "psi": self.psi,
            "diagonal": self.diagonal_included,
            "unit": unit,
            "chunk_rows": max(1, min(PAIR_CHUNK_ROWS, EXACT_FLOAT // (M * per_pair))),
            "batch_pairs": max(1, min(PAIR_BATCH_PAIRS, EXACT_FLOAT // per_pair)),
        }

    def _run(self, tasks: List[Tuple[str, Dict, object]]) -> np.ndarray:
        acc = np.zeros(self.geometry.size, dtype=np.int64)
        if self.workers == 1 or len(tasks) <= 1:
            parts = [_run_task(task) for task in tasks]
        else:
            with Pool(self.workers) as pool:
                parts = pool.map(_run_task, tasks)
        for part in parts:
            acc += part
        return acc

    def _finish(self, raw: np.ndarray, method: str) -> Hist2D:
        total = self.logset.total_raw_mass(self.diagonal_included)
        divisor = self.renorm.divisor(self.logset.N, self.psi, total)
        raw = raw.reshape(self.geometry.shape)
        logger.info(
            f"[PairHistogrammer] {method}: N={self.logset.N}, ψ={self.psi:.6g}, "
            f"масса в окне {int(raw.sum())} из {total}"
        )
        return Hist2D(
            geometry=self.geometry,
            masses=raw / divisor,
            raw=raw,
            total_raw_mass=total,
            renormalizer=divisor,
            diagonal_included=self.diagonal_included,
            meta={
                "N": str(self.logset.N),
                "psi": repr(self.psi),
                "scaling": self.scaling.label(),
                "renorm": self.renorm.label(),
                "weights": self.logset.weight_kind.value,
                "method": method,
                **self.geometry.describe(),
            },
        )

    #region Полный перебор

    def naive(self) -> Hist2D:
        ctx = self._context()
        M = len(self.logset)
        bounds = np.linspace(0, M, self.workers + 1).astype(int)
        tasks = [("naive", ctx, (int(a), int(b))) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        return self._finish(self._run(tasks), "naive")

    #endregion

    #region Перебор по смещениям

    def growth(self) -> float:
        """c = e^{R/ψ} − 1, где R: радиус описанного около окна диска."""
        return math.expm1(self.geometry.enclosing_radius / self.psi)

    def _windowed_context(self) -> Tuple[Dict, np.ndarray]:
        ctx = self._context()
        s = self.logset
        c = self.growth()
        coords = s.points.coords
        moduli = s.points.moduli()
        order = np.argsort(s.points.norm_num, kind="stable")

        if len(s):
            lo = coords.min(axis=0)
            hi = coords.max(axis=0)
            lookup = np.full(tuple(hi - lo + 1), -1, dtype=np.int64)
            lookup[coords[:, 0] - lo[0], coords[:, 1] - lo[1]] = np.arange(len(s))
        else:
            lo = np.zeros(2, dtype=np.int64)
            lookup = np.full((0, 0), -1, dtype=np.int64)

        radius = s.N * c * (1 + WINDOW_SLACK)
        offsets = enumerate_disk(lattice_of(s.grid), radius, exclude_zero=True)
        table = np.column_stack([
            offsets.coords.astype(np.float64),
            offsets.moduli(),
        ]) if len(offsets) else np.zeros((0, 3))
        logger.debug(f"[PairHistogrammer] {len(offsets)} смещений, c={c:.6g}")

        ctx.update({
            "coords": coords,
            "order": order,
            "sorted_mod": moduli[order],
            "lookup": lookup,
            "box_lo": lo,
            "growth": c,
        })
        return ctx, table

    def windowed(self) -> Hist2D:
        ctx, table = self._windowed_context()
        parts = [p for p in np.array_split(table, self.workers) if len(p)]
        tasks = [("windowed", ctx, part) for part in parts]
        raw = self._run(tasks) if tasks else np.zeros(self.geometry.size, dtype=np.int64)
        if self.diagonal_included and len(self.logset):
            raw = raw + self._diagonal_raw(ctx)
        return self._finish(raw, "windowed")

    def _diagonal_raw(self, ctx: Dict) -> np.ndarray:
        idx = np.arange(len(self.logset))
        bins = self.geometry.locate(*_positions(ctx, idx, idx))
        products = None if ctx["unit"] else self.logset.weights * self.logset.weights
        return _deposit(ctx, bins, products)

    #endregion

    #region Атомы

    def atoms(self, method: str = "naive") -> List[PairAtom]:
        """
        Упорядоченные пары, попавшие в окно: (x, y, Re, Im, ω(x)ω(y)).

        Предназначено для малых множеств: naive строит все M² пар сразу.
        """
        if method == "naive":
            ctx = self._context()
            M = len(self.logset)
            xi, yi = np.meshgrid(np.arange(M), np.arange(M), indexing="ij")
            xi, yi = xi.ravel(), yi.ravel()
            if not self.diagonal_included:
                keep = xi != yi
                xi, yi = xi[keep], yi[keep]
            chunks = [(xi, yi)]
        elif method == "windowed":
            ctx, table = self._windowed_context()
            chunks = list(_windowed_pairs(ctx, table))
            if self.diagonal_included:
                idx = np.arange(len(self.logset))
                chunks.append((idx, idx))
        else:
            raise ValidationFailure(f"Неизвестный метод перебора '{method}'")

        weights = self.logset.weights
        result: List[PairAtom] = []
        for xi, yi in chunks:
            re, im = _positions(ctx, xi, yi)
            inside = self.geometry.locate(re, im) >= 0
            for x, y, a, b in zip(xi[inside], yi[inside], re[inside], im[inside]):
                result.append((int(x), int(y), float(a), float(b), int(weights[x]) * int(weights[y])))
        return sorted(result)

    #endregion

    def execute(self, method: str = "auto") -> Hist2D:
        """auto: перебор по смещениям в масштабированных режимах, иначе полный."""
        if method == "auto":
            method = "windowed" if self.scaling.regime.scaled else "naive"
        if method == "naive":
            return self.naive()
        if method == "windowed":
            return self.windowed()
        raise ValidationFailure(f"Неизвестный метод перебора '{method}'")
