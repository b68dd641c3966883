"""Reproduction checks for the published constants and structural claims.

Each check returns a :class:`CheckResult`; ``run_all`` runs the registry in
order.  The same checks back ``kippen reproduce`` and the pytest acceptance
module.  Independent oracles here use ``numpy.linalg`` directly so they do
not share code paths with the Jacobi solver.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import analysis, kipp, polygon
from .matcore import hermitian_eigen, hermitian_eigen_stack, im_part, re_part, rotate
from .pisom import (
    ExceptionalDim5,
    NilpotentDim4,
    NilpotentDim5,
    Rank2Dim3,
    SplitMix64,
    build,
    exceptional_constants,
    random_partial_isometry,
    random_unitary,
    validate_partial_isometry,
)

OVULAR = np.array([
    [0, 0.5 * math.sqrt(0.5), -math.sqrt(15) * math.sqrt(3.5) / 8],
    [0, 0.5 * math.sqrt(3.5), math.sqrt(15) * math.sqrt(0.5) / 8],
    [0, 0, 0.25],
], dtype=np.complex128)


@dataclass
class CheckResult:
    id: str
    title: str
    passed: bool = True
    details: list[str] = field(default_factory=list)

    def expect(self, ok, message: str) -> bool:
        ok = bool(ok)
        self.details.append(("ok   " if ok else "FAIL ") + message)
        self.passed = self.passed and ok
        return ok


def _oracle_eigs(H) -> np.ndarray:
    return np.linalg.eigvalsh(H)[::-1]


def check_constants() -> CheckResult:
    r = CheckResult("c-constants", "exceptional constants c+ and c-")
    k = exceptional_constants()
    # printed values are truncated ("0.55495..."), so compare leading digits
    r.expect(math.floor(k.c_plus * 1e5) == 55495, f"c+ = {k.c_plus:.12g} vs 0.55495...")
    r.expect(math.floor(k.c_minus * 1e5) == 80193, f"c- = {k.c_minus:.12g} vs 0.80193...")
    res_p = abs(k.c_plus**3 - 2 * k.c_plus**2 - k.c_plus + 1)
    res_m = abs(k.c_minus**3 + 2 * k.c_minus**2 - k.c_minus - 1)
    r.expect(res_p <= 1e-12, f"|c+^3 - 2c+^2 - c+ + 1| = {res_p:.3g} <= 1e-12")
    r.expect(res_m <= 1e-12, f"|c-^3 + 2c-^2 - c- - 1| = {res_m:.3g} <= 1e-12")
    return r


def check_exceptional_spectrum() -> CheckResult:
    r = CheckResult("spectrum-5", "spectrum of Re A for the c+ exceptional matrix")
    vals = hermitian_eigen(re_part(build(ExceptionalDim5("+", 0.0)))).values
    expected = [0.62348, 0.62348, -0.12348, -0.36660, -0.75688]
    for got, want in zip(vals, expected):
        r.expect(abs(got - want) <= 1e-4, f"{got:.12g} vs {want}")
    r.expect(vals[0] - vals[1] <= 1e-6, f"top pair gap {vals[0] - vals[1]:.3g} <= 1e-6")
    return r


def check_flat_portion() -> CheckResult:
    r = CheckResult("flat-portion", "flat boundary segment for c+, none for c-")
    plus = analysis.flat_portions(build(ExceptionalDim5("+", 0.0)))
    targets = (0.62349 + 0.08077j, 0.62349 - 0.08077j)
    found = any(
        all(min(abs(e - t) for e in fp.endpoints) <= 1e-3 for t in targets)
        for fp in plus)
    ends = [f"{e:.6g}" for fp in plus for e in fp.endpoints]
    r.expect(found, f"c+ endpoints {ends} within 1e-3 of 0.62349 +- 0.08077i")
    minus = analysis.flat_portions(build(ExceptionalDim5("-", 0.0)))
    r.expect(not minus, f"c- flat portions: {len(minus)} (expected 0)")
    return r


def check_noncircular_example() -> CheckResult:
    r = CheckResult("noncircular-5", "b = t = 1/2 example is not a disk")
    A = build(NilpotentDim5(0.5, 0.5))
    re_vals = hermitian_eigen(re_part(A)).values
    im_vals = hermitian_eigen(im_part(A)).values
    r.expect(abs(re_vals[-1] + 0.79435) <= 1e-4, f"min eig Re A = {re_vals[-1]:.12g} vs -0.79435")
    r.expect(abs(re_vals[0] - 0.75) <= 1e-4, f"max eig Re A = {re_vals[0]:.12g} vs 0.75")
    r.expect(abs(im_vals[0] - 0.77482) <= 1e-4, f"max eig Im A = {im_vals[0]:.12g} vs 0.77482")
    r.expect(abs(im_vals[-1] + 0.77482) <= 1e-4, f"min eig Im A = {im_vals[-1]:.12g} vs -0.77482")
    r.expect(kipp.circular_disk_test(A) is None, "circular_disk_test returns None")
    radii = [x for x in kipp.detect_circles(A).radii if x > 1e-8]
    r.expect(not radii, f"nonzero circle radii: {radii} (expected none)")
    return r


def _edge_params(points: int = 11):
    grid = np.linspace(0.0, 1.0, points)
    seen = set()
    for v in grid:
        for bt in ((0.0, v), (1.0, v), (v, 0.0), (v, 1.0)):
            if bt not in seen:
                seen.add(bt)
                yield bt


def check_circularity_criterion() -> CheckResult:
    r = CheckResult("circularity-5", "disk iff bcst = 0, radius r+")
    interior = [(i / 21, j / 21) for i in range(1, 21) for j in range(1, 21)]
    bad = []
    for b, t in interior:
        spec = NilpotentDim5(b, t)
        if analysis.circularity_criterion_5x5(spec).circular:
            bad.append((b, t, "criterion"))
        elif kipp.circular_disk_test(build(spec), m=90) is not None:
            bad.append((b, t, "disk test"))
    r.expect(not bad, f"20x20 interior grid non-circular ({len(interior)} points, failures {bad[:3]})")

    worst_r = worst_circ = worst_oracle = 0.0
    failures = []
    for b, t in _edge_params():
        spec = NilpotentDim5(b, t)
        A = build(spec)
        r_plus, r_minus = kipp.nilpotent5_radii(spec.b, spec.c, spec.t)
        verdict = analysis.circularity_criterion_5x5(spec)
        disk = kipp.circular_disk_test(A, m=180)
        circles = kipp.detect_circles(A, m=180).radii
        oracle = _oracle_eigs(re_part(A))
        if not verdict.circular or disk is None:
            failures.append((b, t))
            continue
        worst_r = max(worst_r, abs(disk - r_plus), abs(verdict.radius - r_plus))
        worst_oracle = max(worst_oracle, abs(oracle[0] - r_plus),
                           abs(oracle[1] - r_minus), abs(oracle[2]))
        want = sorted({0.0, r_minus, r_plus})
        if len(circles) != len(want):
            failures.append((b, t, circles))
            continue
        worst_circ = max(worst_circ, max(abs(x - y) for x, y in zip(circles, want)))
    r.expect(not failures, f"edge lines circular (failures {failures[:3]})")
    r.expect(worst_r <= 1e-8, f"disk radius vs r+: max err {worst_r:.3g} <= 1e-8")
    r.expect(worst_circ <= 1e-8, f"circles vs {{0, r-, r+}}: max err {worst_circ:.3g} <= 1e-8")
    r.expect(worst_oracle <= 1e-8, f"eigvalsh oracle vs r+-: max err {worst_oracle:.3g} <= 1e-8")
    return r


def check_kippenhahn_coeffs() -> CheckResult:
    r = CheckResult("kippenhahn-5", "Kippenhahn polynomial of the 5x5 family")
    worst = 0.0
    for b in np.linspace(0, 1, 5):
        for t in np.linspace(0, 1, 5):
            spec = NilpotentDim5(b, t)
            A = build(spec)
            for theta in np.linspace(-np.pi, np.pi, 8, endpoint=False):
                got = kipp.kippenhahn_coeffs(A, theta).monic().coeffs
                lin = (spec.c**2 * spec.t**2 + spec.b**2 + 1) / 16
                const = spec.bcst * math.cos(theta) / 16
                # printed form is -lambda^5 + ...; monic form is its negative
                want = np.array([const, lin, 0, -0.75, 0, 1])
                got = np.pad(got, (0, 6 - got.size))
                worst = max(worst, float(np.max(np.abs(got - want))))
    r.expect(worst <= 1e-10, f"max coefficient error {worst:.3g} <= 1e-10 over 5x5x8 grid")
    return r


def check_nilpotent4() -> CheckResult:
    r = CheckResult("nilpotent-4", "4x4 nilpotent family against its oracle")
    thetas = np.linspace(-np.pi, np.pi, 64, endpoint=False)
    dev = err = rad = 0.0
    for b in np.linspace(0, 1, 21):
        spec = NilpotentDim4(b)
        A = build(spec)
        outer, inner = kipp.nilpotent4_radii(spec.b)
        want = np.array([outer, inner, -inner, -outer])
        rows = np.array([_oracle_eigs(re_part(rotate(A, th))) for th in thetas])
        ours, _ = hermitian_eigen_stack(kipp.rotated_hermitian_parts(A, thetas))
        dev = max(dev, float(np.max(ours.max(axis=0) - ours.min(axis=0))))
        err = max(err, float(np.max(np.abs(ours - want))),
                  float(np.max(np.abs(rows - want))))
        disk = kipp.circular_disk_test(A, m=180)
        rad = max(rad, math.inf if disk is None else abs(disk - outer))
    r.expect(dev <= 1e-9, f"theta-dependence of spectrum {dev:.3g} <= 1e-9")
    r.expect(err <= 1e-10, f"spectrum vs +-(1/2)sqrt(1 +- c): {err:.3g} <= 1e-10")
    r.expect(rad <= 1e-10, f"disk radius vs (1/2)sqrt(1 + c): {rad:.3g}")
    r0 = kipp.circular_disk_test(build(NilpotentDim4(0.0)))
    r.expect(r0 is not None and abs(r0 - math.sqrt(2) / 2) <= 1e-10,
             f"b = 0 radius {r0} vs sqrt(2)/2")
    return r


def _random_generic_params(count: int, seed: int):
    k = exceptional_constants()
    special = [(math.sqrt(1 - k.c_plus**2), k.t_plus),
               (math.sqrt(1 - k.c_minus**2), k.t_minus)]
    rng = SplitMix64(seed)
    out = []
    while len(out) < count:
        b = 0.02 + 0.96 * rng.next_double()
        t = 0.02 + 0.96 * rng.next_double()
        if all(math.hypot(b - sb, t - st) > 0.05 for sb, st in special):
            out.append((b, t))
    return out


def check_genericity() -> CheckResult:
    r = CheckResult("genericity", "generic off the two exceptional matrices")
    for b in np.round(np.arange(1, 10) / 10, 1):
        g = analysis.genericity(build(NilpotentDim4(b)))
        r.expect(g.generic, f"NilpotentDim4(b={b}) generic, min gap {g.min_gap:.4g}")
    fails = []
    smallest = math.inf
    for b, t in _random_generic_params(50, seed=2024):
        g = analysis.genericity(build(NilpotentDim5(b, t)), m=360)
        smallest = min(smallest, g.min_gap)
        if not g.generic:
            fails.append((round(b, 4), round(t, 4)))
    r.expect(not fails, f"50 random NilpotentDim5 generic (min gap {smallest:.4g}, failures {fails})")
    for sign in "+-":
        for phi in (0.0, 0.3, 2.0, 4.5):
            g = analysis.genericity(build(ExceptionalDim5(sign, phi)))
            r.expect(not g.generic,
                     f"ExceptionalDim5({sign}, {phi}) non-generic, gap {g.min_gap:.3g} at level {g.witness_level}")
    return r


def check_classify_3x3() -> CheckResult:
    r = CheckResult("classify-3x3", "ellipse iff lambda1 = +-lambda2, else ovular")
    rng = SplitMix64(99)
    wrong = []
    counts = {"EllipticalDisk": 0, "Ovular": 0, "FlatPortion": 0}
    for i in range(100):
        rad = 0.95 * math.sqrt(rng.next_double())
        ang = 2 * math.pi * rng.next_double()
        l1 = rad * complex(math.cos(ang), math.sin(ang))
        mode = i % 3
        if mode == 0:
            l2 = l1
        elif mode == 1:
            l2 = -l1
        else:
            rad2 = 0.95 * math.sqrt(rng.next_double())
            ang2 = 2 * math.pi * rng.next_double()
            l2 = rad2 * complex(math.cos(ang2), math.sin(ang2))
        cls = analysis.classify_3x3(build(Rank2Dim3(l1, l2)), tol=1e-9)
        counts[cls.verdict] += 1
        expect_ellipse = abs(l1 - l2) <= 1e-9 or abs(l1 + l2) <= 1e-9
        if (cls.verdict == "EllipticalDisk") != expect_ellipse:
            wrong.append(i)
            continue
        if expect_ellipse:
            foci = sorted(cls.foci, key=lambda z: (z.real, z.imag))
            want = sorted((l1, l2) if abs(l1 + l2) <= 1e-9 else (0j, l1),
                          key=lambda z: (z.real, z.imag))
            if max(abs(x - y) for x, y in zip(foci, want)) > 1e-9:
                wrong.append(i)
    r.expect(not wrong, f"100 samples, verdicts {counts}, mismatches {wrong}")
    r.expect(counts["FlatPortion"] == 0, "FlatPortion never occurs")
    v = analysis.classify_3x3(OVULAR, tol=1e-9).verdict
    r.expect(v == "Ovular", f"printed ovular example classifies {v}")
    return r


def _support_radius_spread(poly: np.ndarray, thetas: np.ndarray, radius: float):
    h = polygon.support(poly, thetas)
    return float(np.max(np.abs(h - radius)))


def check_rank_k() -> CheckResult:
    r = CheckResult("rank-k", "higher-rank numerical ranges")
    thetas = kipp.theta_grid(kipp.DEFAULT_GRID)
    spec4 = NilpotentDim4(0.5)
    A4 = build(spec4)
    _, inner = kipp.nilpotent4_radii(spec4.b)
    l2 = kipp.rank_k_range(A4, 2)
    ok = l2.kind == "Polygon"
    err = _support_radius_spread(l2.verdict.vertices, thetas, inner) if ok else math.inf
    r.expect(ok and err <= 1e-6, f"NilpotentDim4(0.5) rank-2: {l2.kind}, support vs (1/2)sqrt(1-c) err {err:.3g}")
    l3 = kipp.rank_k_range(A4, 3)
    r.expect(l3.kind == "EmptySet", f"NilpotentDim4(0.5) rank-3: {l3.kind}")

    for b, t in ((0.0, 0.0), (0.6, 0.0), (0.0, 0.4)):
        spec = NilpotentDim5(b, t)
        A = build(spec)
        _, r_minus = kipp.nilpotent5_radii(spec.b, spec.c, spec.t)
        l2 = kipp.rank_k_range(A, 2)
        ok = l2.kind == "Polygon"
        err = _support_radius_spread(l2.verdict.vertices, thetas, r_minus) if ok else math.inf
        r.expect(ok and err <= 1e-6, f"NilpotentDim5({b}, {t}) rank-2 support vs r- err {err:.3g}")
        l3 = kipp.rank_k_range(A, 3)
        ok = l3.kind == "SinglePoint" and abs(l3.verdict.z) <= 1e-6
        r.expect(ok, f"NilpotentDim5({b}, {t}) rank-3: {l3.verdict}")
        l4 = kipp.rank_k_range(A, 4)
        r.expect(l4.kind == "EmptySet", f"NilpotentDim5({b}, {t}) rank-4: {l4.kind}")
    return r


def check_reducibility_table() -> CheckResult:
    r = CheckResult("reducibility-5", "unitary (ir)reducibility by case")
    cases = [("(i) b=0", (0.0, 0.4), False), ("(i) b=0", (0.0, 0.8), False),
             ("(iii) t=0", (0.3, 0.0), False), ("(iii) t=0", (0.7, 0.0), False),
             ("(ii) b=1", (1.0, 0.4), True), ("(ii) b=1", (1.0, 0.8), True),
             ("(iv) t=1", (0.3, 1.0), True), ("(iv) t=1", (0.7, 1.0), True)]
    cases += [("corner", (b, t), True) for b in (0.0, 1.0) for t in (0.0, 1.0)]
    for label, (b, t), reducible in cases:
        A = build(NilpotentDim5(b, t))
        rep = analysis.reducibility(A)
        msg = f"{label} b={b} t={t}: reducible={rep.reducible} dim={rep.commutant_dim}"
        ok = rep.reducible == reducible and rep.commutant_dim == (2 if reducible else 1)
        if reducible and rep.projector is not None:
            P = rep.projector
            comm = float(np.linalg.norm(P @ A - A @ P))
            idem = float(np.linalg.norm(P @ P - P) + np.linalg.norm(P - P.conj().T))
            rank = round(float(np.trace(P).real))
            ok = ok and comm <= 1e-8 and idem <= 1e-8 and 0 < rank < 5
            msg += f", projector rank {rank}, ||PA - AP|| = {comm:.3g}"
        r.expect(ok, msg)
    return r


def _distance_to_polyline(z: complex, pts: np.ndarray) -> float:
    a = pts
    b = np.roll(pts, -1)
    d = b - a
    denom = np.where(np.abs(d) > 0, np.abs(d) ** 2, 1.0)
    u = np.clip(((z - a) * d.conjugate()).real / denom, 0, 1)
    return float(np.min(np.abs(a + u * d - z)))


def check_invariants() -> CheckResult:
    r = CheckResult("invariants", "covariance, support consistency, nesting, AA*A = A")
    m = 360
    samples = [build(NilpotentDim5(0.5, 0.5)), build(Rank2Dim3(0.3 + 0.2j, -0.5)),
               random_partial_isometry(5, 3, 7), random_partial_isometry(4, 2, 1)]
    step = 2 * np.pi / m
    rot = tran = supp = 0.0
    for A in samples:
        base = kipp.boundary(A, m)
        shift = 17
        phi = shift * step
        turned = kipp.boundary(rotate(A, -phi), m)
        # theta on the turned grid equals theta - phi on the base grid
        rot = max(rot, float(np.max(np.abs(turned.points - np.exp(1j * phi) * np.roll(base.points, shift)))))
        for z in (0.3 - 0.1j, -1 + 2j):
            moved = kipp.boundary(A + z * np.eye(A.shape[0]), m)
            tran = max(tran, float(np.max(np.abs(moved.points - base.points - z))))
        sw = kipp.sweep(A, m)
        supp = max(supp, float(np.max(np.abs(
            (np.exp(-1j * base.thetas) * base.points).real - sw.support))))
    r.expect(rot <= 1e-8, f"rotation covariance {rot:.3g} <= 1e-8")
    r.expect(tran <= 1e-8, f"translation covariance {tran:.3g} <= 1e-8")
    r.expect(supp <= 1e-9, f"support function consistency {supp:.3g} <= 1e-9")

    nest_ok = True
    for A in samples[:3] + [build(NilpotentDim5(0.0, 0.0))]:
        n = A.shape[0]
        ranges = [kipp.rank_k_range(A, k, m) for k in range(1, n + 1)]
        for outer, inner in zip(ranges, ranges[1:]):
            if inner.kind == "EmptySet":
                continue
            if outer.kind != "Polygon":
                nest_ok = False if outer.kind == "EmptySet" else nest_ok
                continue
            pts = (inner.verdict.vertices if inner.kind == "Polygon"
                   else np.array([inner.verdict.z]))
            nest_ok &= all(polygon.contains(outer.verdict.vertices, p, 1e-9) for p in pts)
    r.expect(nest_ok, "rank-k ranges nested")

    fp = analysis.flat_portions(build(ExceptionalDim5("+", 0.0)))
    curve = kipp.boundary(build(ExceptionalDim5("+", 0.0)), 7200).points
    on_line = max(abs((np.exp(-1j * p.direction) * e).real - p.support_value)
                  for p in fp for e in p.endpoints)
    near = max(_distance_to_polyline(e, curve) for p in fp for e in p.endpoints)
    r.expect(on_line <= 1e-8, f"flat endpoints on support line {on_line:.3g} <= 1e-8")
    r.expect(near <= 1e-6, f"flat endpoints near boundary curve {near:.3g} <= 1e-6")

    specs = [NilpotentDim4(b) for b in (0.0, 0.3, 1.0)]
    specs += [NilpotentDim5(b, t) for b in (0.0, 0.5, 1.0) for t in (0.0, 0.5, 1.0)]
    specs += [ExceptionalDim5(s, p) for s in "+-" for p in (0.0, 1.0)]
    specs += [Rank2Dim3(0.5, 0.5), Rank2Dim3(0.3j, -0.9)]
    r.expect(all(validate_partial_isometry(build(s), 1e-10) for s in specs),
             f"AA*A = A for {len(specs)} constructed family members")
    same = all(np.array_equal(random_partial_isometry(5, 3, s), random_partial_isometry(5, 3, s))
               for s in (0, 7, 12345))
    valid = all(validate_partial_isometry(random_partial_isometry(n, k, s))
                for n, k, s in ((5, 3, 7), (4, 2, 1), (6, 1, 3), (3, 3, 5)))
    r.expect(same and valid, "random partial isometries deterministic per seed and valid")
    U = random_unitary(5, SplitMix64(3))
    A = build(NilpotentDim5(0.5, 0.5))
    r.expect(analysis.reducibility(U.conj().T @ A @ U).commutant_dim
             == analysis.reducibility(A).commutant_dim,
             "commutant dimension invariant under unitary similarity")
    return r


CHECKS = {
    "c-constants": check_constants,
    "spectrum-5": check_exceptional_spectrum,
    "flat-portion": check_flat_portion,
    "noncircular-5": check_noncircular_example,
    "circularity-5": check_circularity_criterion,
    "kippenhahn-5": check_kippenhahn_coeffs,
    "nilpotent-4": check_nilpotent4,
    "genericity": check_genericity,
    "classify-3x3": check_classify_3x3,
    "rank-k": check_rank_k,
    "reducibility-5": check_reducibility_table,
    "invariants": check_invariants,
}


def run_all(only=None) -> list[CheckResult]:
    ids = list(CHECKS) if not only else list(only)
    unknown = [i for i in ids if i not in CHECKS]
    if unknown:
        raise KeyError(f"unknown check id(s): {', '.join(unknown)}")
    return [CHECKS[i]() for i in ids]
