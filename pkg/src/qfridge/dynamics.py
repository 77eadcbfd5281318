"""Dissipators, the full generator, population rate matrix, and steady states.

Superoperators use column-stacking vectorization: ``vec(A rho B) =
(B^T kron A) vec(rho)`` with ``vec = rho.flatten(order="F")``.

Two solver routes coexist deliberately.  The population route restricts the
dynamics to eigenlevel occupations (an 8x8 real rate matrix), which is exact
here because every channel operator has diagonal A^dag A and A A^dag in the
eigenbasis.  The Liouvillian route works on the full 64-dimensional
generator and serves as a safety net; both are cross-checked in the tests.

Multiple steady states are enumerated per closed communicating class of the
population rate graph rather than returned as raw null-space vectors, so
each returned state is a physical density matrix with a definite support.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .matrixcore import DensityMatrix, dagger, dm_validate, null_space
from .reservoirs import (
    REVIVAL_FILTER,
    BackgroundSpec,
    ChannelRates,
    FilterConfig,
    ReservoirSet,
    background_rates,
    channel_rates,
    cycle_match_check,
    select_channels,
    warn_if_markov_strained,
)
from .spectrum import (
    DIM,
    EigenSystem,
    SystemParams,
    TransitionChannel,
    build_hamiltonian,
    check_nondegenerate,
    eigensystem,
    transition_channels,
)

__all__ = [
    "Dissipator",
    "Generator",
    "ComponentDecomposition",
    "SteadyState",
    "SteadyStateSet",
    "SolverFailure",
    "TriangleBranch",
    "AnalyticBranches",
    "VacuumBackgroundSolution",
    "PropagationResult",
    "apply_dissipator",
    "build_generator",
    "build_population_matrix",
    "invariant_components",
    "steady_states_numeric",
    "steady_state_branches_analytic",
    "steady_state_vacuum_background_analytic",
    "propagate",
    "branch_weights",
]

#: Residual bound for accepting a steady state: ||L vec(rho)|| <= RES_TOL ||L||.
STEADY_RESIDUAL_TOL = 1e-9

#: Default convergence threshold for time propagation, ||d rho / dt|| < eps.
DEFAULT_EPS_SS = 1e-10


class SolverFailure(RuntimeError):
    """A steady-state solve did not meet its residual or structure checks."""


@dataclass(frozen=True)
class Dissipator:
    """One channel's dissipative contribution, engineered or background."""

    channel: TransitionChannel
    rates: ChannelRates
    source: str  # engineered | background

    @property
    def qubit(self) -> str:
        return self.channel.qubit

    def __str__(self) -> str:
        return f"{self.source}:{self.channel}"


def apply_dissipator(d: Dissipator, rho: np.ndarray) -> np.ndarray:
    """Action of one dissipator on a state:

    j+ (2 A^dag rho A - A A^dag rho - rho A A^dag)
    + j- (2 A rho A^dag - A^dag A rho - rho A^dag A)
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (DIM, DIM):
        raise ValueError(f"expected an {DIM}x{DIM} state, got {rho.shape}")
    a = d.channel.operator
    ad = dagger(a)
    aad = a @ ad
    ada = ad @ a
    jp, jm = d.rates.j_plus, d.rates.j_minus
    out = jm * (2.0 * (a @ rho @ ad) - ada @ rho - rho @ ada)
    if jp != 0.0:
        out += jp * (2.0 * (ad @ rho @ a) - aad @ rho - rho @ aad)
    return out


def _sandwich(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # superoperator for rho -> a rho b
    return np.kron(b.T, a)


def _dissipator_superop(d: Dissipator) -> np.ndarray:
    a = d.channel.operator
    ad = dagger(a)
    aad = a @ ad
    ada = ad @ a
    eye = np.eye(DIM)
    jp, jm = d.rates.j_plus, d.rates.j_minus
    sup = jm * (
        2.0 * _sandwich(a, ad) - _sandwich(ada, eye) - _sandwich(eye, ada)
    )
    if jp != 0.0:
        sup += jp * (
            2.0 * _sandwich(ad, a) - _sandwich(aad, eye) - _sandwich(eye, aad)
        )
    return sup


@dataclass(frozen=True)
class Generator:
    """Assembled dynamics for one scenario.

    ``liouvillian`` is the 64x64 matrix generating ``d vec(rho)/dt``; it sums
    the engineered (filtered) dissipators, the background dissipators over
    all nine channels when a background is active, and (by default) the
    coherent commutator term.  The commutator never touches eigenlevel
    populations, so every population-level result is independent of it; it
    is kept so that undamped coherences between nondegenerate levels do not
    masquerade as extra stationary states of the full generator.
    """

    params: SystemParams
    filter: FilterConfig
    reservoirs: ReservoirSet
    background: BackgroundSpec
    hamiltonian: np.ndarray = field(repr=False)
    eigen: EigenSystem = field(repr=False)
    channels: tuple[TransitionChannel, ...] = field(repr=False)
    dissipators: tuple[Dissipator, ...] = field(repr=False)
    liouvillian: np.ndarray = field(repr=False)
    includes_hamiltonian: bool = True

    @property
    def engineered(self) -> tuple[Dissipator, ...]:
        return tuple(d for d in self.dissipators if d.source == "engineered")

    @property
    def background_dissipators(self) -> tuple[Dissipator, ...]:
        return tuple(d for d in self.dissipators if d.source == "background")


def build_generator(
    params: SystemParams,
    filt: FilterConfig,
    reservoirs: ReservoirSet,
    background: BackgroundSpec | None = None,
    include_hamiltonian: bool = True,
    allow_degenerate: bool = False,
) -> Generator:
    """Assemble dissipators and the vectorized generator for a scenario.

    Engineered dissipators cover exactly the kept channels; an active
    background couples through all nine channels.  Unless
    ``allow_degenerate``, parameter sets where two participating channel
    frequencies coincide are rejected, since the secular dissipator form
    presumes distinct frequencies.  A warning (never an error) is emitted
    when decay rates strain the Markov validity margin.
    """
    background = background or BackgroundSpec.none()
    channels = transition_channels(params)
    kept = select_channels(channels, filt)

    participating = [ch.key for ch in kept]
    if background.active:
        participating = [ch.key for ch in channels]
    if not allow_degenerate and participating:
        check_nondegenerate(params, participating)

    dissipators: list[Dissipator] = []
    gamma_max = 0.0
    for ch in kept:
        spec = reservoirs[ch.qubit]
        dissipators.append(Dissipator(ch, channel_rates(ch, spec), "engineered"))
        gamma_max = max(gamma_max, spec.gamma_for(ch.index))
    if background.active:
        for ch in channels:
            dissipators.append(Dissipator(ch, background_rates(ch, background), "background"))
        gamma_max = max(gamma_max, background.gamma)

    if participating:
        warn_if_markov_strained(params, participating, gamma_max)

    h = build_hamiltonian(params)
    liou = np.zeros((DIM * DIM, DIM * DIM), dtype=complex)
    if include_hamiltonian:
        eye = np.eye(DIM)
        liou += -1j * (_sandwich(h, eye) - _sandwich(eye, h))
    for d in dissipators:
        liou += _dissipator_superop(d)

    return Generator(
        params=params,
        filter=filt,
        reservoirs=reservoirs,
        background=background,
        hamiltonian=h,
        eigen=eigensystem(params),
        channels=tuple(channels),
        dissipators=tuple(dissipators),
        liouvillian=liou,
        includes_hamiltonian=include_hamiltonian,
    )


def population_matrix_of(d: Dissipator) -> np.ndarray:
    """8x8 rate matrix of a single dissipator on eigenlevel populations."""
    w = np.zeros((DIM, DIM))
    jp, jm = d.rates.j_plus, d.rates.j_minus
    weight = d.channel.pair_weight
    for to, frm, _ in d.channel.elements:
        w[frm, frm] -= weight * jm
        w[to, frm] += weight * jm
        w[to, to] -= weight * jp
        w[frm, to] += weight * jp
    return w


def build_population_matrix(dissipators) -> np.ndarray:
    """Total rate matrix W with d p / dt = W p for the level populations.

    Columns sum to zero (probability conservation) and off-diagonal entries
    are nonnegative by construction.
    """
    w = np.zeros((DIM, DIM))
    for d in dissipators:
        w += population_matrix_of(d)
    return w


@dataclass(frozen=True)
class ComponentDecomposition:
    """Closed communicating classes of the population transition graph.

    ``closed`` holds the classes that admit a stationary distribution, each
    a frozenset of 0-based levels, sorted by smallest member.  Levels not in
    any closed class are transient; ``reachable_from`` maps each transient
    level to the positions (into ``closed``) of the classes it can decay to.
    """

    closed: tuple[frozenset[int], ...]
    transient: tuple[int, ...]
    reachable_from: dict[int, tuple[int, ...]]

    @property
    def partition(self) -> tuple[frozenset[int], ...]:
        """Closed classes plus transient singletons, covering all levels."""
        cells = list(self.closed) + [frozenset((t,)) for t in self.transient]
        return tuple(sorted(cells, key=min))


def invariant_components(w: np.ndarray) -> ComponentDecomposition:
    """Decompose levels by the directed graph with an edge i -> j wherever
    the rate W[j, i] is positive."""
    n = w.shape[0]
    # step[i, j]: edge i -> j exists (rate into j from i)
    step = (np.asarray(w).T > 0.0)
    np.fill_diagonal(step, True)
    # boolean transitive closure by repeated squaring (n is tiny)
    reach = step.copy()
    for _ in range(4):
        reach = reach | (reach @ reach)
    # mutual reachability defines the communicating classes
    seen: set[int] = set()
    classes: list[frozenset[int]] = []
    for i in range(n):
        if i in seen:
            continue
        cls = frozenset(j for j in range(n) if reach[i, j] and reach[j, i])
        classes.append(cls)
        seen |= cls
    closed = []
    for cls in classes:
        outside = [j for j in range(n) if j not in cls]
        if not outside or not step[np.ix_(sorted(cls), outside)].any():
            closed.append(cls)
    closed.sort(key=min)
    closed_levels: set[int] = set().union(*closed) if closed else set()
    transient = tuple(i for i in range(n) if i not in closed_levels)
    reachable = {
        t: tuple(k for k, cls in enumerate(closed) if any(reach[t, j] for j in cls))
        for t in transient
    }
    return ComponentDecomposition(tuple(closed), transient, reachable)


@dataclass(frozen=True)
class SteadyState:
    state: DensityMatrix
    support: frozenset[int]
    populations: np.ndarray


@dataclass(frozen=True)
class SteadyStateSet:
    states: tuple[SteadyState, ...]
    unique: bool

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def by_support(self, support) -> SteadyState:
        target = frozenset(support)
        for s in self.states:
            if s.support == target:
                return s
        raise KeyError(f"no steady state supported on {sorted(target)}")


def _stationary_on_class(w: np.ndarray, cls: frozenset[int]) -> np.ndarray:
    """Stationary populations of one closed class, embedded in 8 levels."""
    idx = sorted(cls)
    pops = np.zeros(DIM)
    if len(idx) == 1:
        pops[idx[0]] = 1.0
        return pops
    sub = w[np.ix_(idx, idx)]
    basis = null_space(sub)
    if basis.shape[1] != 1:
        raise SolverFailure(
            f"class {idx} yielded a {basis.shape[1]}-dimensional stationary "
            f"space; expected exactly 1"
        )
    v = np.real(basis[:, 0])
    v = v / v.sum()
    if v.min() < -1e-12:
        raise SolverFailure(f"negative stationary population {v.min():.3e} on {idx}")
    pops[idx] = np.clip(v, 0.0, None)
    pops /= pops.sum()
    return pops


def steady_states_numeric(
    gen: Generator,
    decomposition: ComponentDecomposition | None = None,
    method: str = "population",
) -> SteadyStateSet:
    """One steady state per closed communicating class.

    ``method="population"`` solves the 8x8 rate matrix per class;
    ``method="liouvillian"`` extracts the same states from the null space of
    the full 64x64 generator.  Every returned state passes density-matrix
    validation and the generator residual bound
    ``||L vec(rho)|| <= STEADY_RESIDUAL_TOL * ||L||``.
    """
    w = build_population_matrix(gen.dissipators)
    decomp = decomposition or invariant_components(w)
    if not decomp.closed:
        raise SolverFailure("no closed communicating class found")

    if method == "population":
        pop_vectors = [_stationary_on_class(w, cls) for cls in decomp.closed]
    elif method == "liouvillian":
        pop_vectors = _stationary_from_liouvillian(gen, decomp)
    else:
        raise ValueError(f"unknown method {method!r}")

    lnorm = np.linalg.norm(gen.liouvillian, 2)
    states = []
    for cls, pops in zip(decomp.closed, pop_vectors):
        rho = gen.eigen.diagonal_state(pops)
        resid = np.linalg.norm(gen.liouvillian @ rho.flatten(order="F"))
        if resid > STEADY_RESIDUAL_TOL * lnorm:
            raise SolverFailure(
                f"steady state on {sorted(cls)} has residual {resid:.3e} "
                f"(bound {STEADY_RESIDUAL_TOL * lnorm:.3e})"
            )
        states.append(SteadyState(dm_validate(rho), cls, pops))
    return SteadyStateSet(tuple(states), unique=(len(states) == 1))


def _stationary_from_liouvillian(
    gen: Generator, decomp: ComponentDecomposition
) -> list[np.ndarray]:
    basis = null_space(gen.liouvillian)
    k = basis.shape[1]
    if k < len(decomp.closed):
        raise SolverFailure(
            f"Liouvillian null space has dimension {k}, below the "
            f"{len(decomp.closed)} closed classes"
        )
    # Class masses of each null vector; steady states are the combinations
    # with unit mass on one class and zero on the others.
    masses = np.zeros((len(decomp.closed), k))
    pops_all = []
    for col in range(k):
        rho = basis[:, col].reshape(DIM, DIM, order="F")
        pops_all.append(np.real(np.diag(gen.eigen.to_eigenbasis(rho))))
    for i, cls in enumerate(decomp.closed):
        for col in range(k):
            masses[i, col] = pops_all[col][sorted(cls)].sum()
    out = []
    for i, cls in enumerate(decomp.closed):
        try:
            alpha = np.linalg.lstsq(masses, np.eye(len(decomp.closed))[i], rcond=None)[0]
        except np.linalg.LinAlgError as exc:
            raise SolverFailure(f"class mass system is singular: {exc}") from exc
        pops = np.zeros(DIM)
        for col in range(k):
            pops += alpha[col] * pops_all[col]
        if abs(pops.sum() - 1.0) > 1e-8 or pops.min() < -1e-8:
            raise SolverFailure(f"null-space combination for {sorted(cls)} unphysical")
        pops = np.clip(pops, 0.0, None)
        pops /= pops.sum()
        out.append(pops)
    return out


# ---------------------------------------------------------------------------
# Closed-form steady states
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TriangleBranch:
    """One flowing branch: a three-level cycle driven by all three baths.

    ``tree_sum`` is the matrix-tree normalization of the stationary
    populations and ``cycle_flux`` the net probability flux around the cycle,
    oriented so that positive flux absorbs from the cold and hot reservoirs
    and emits into the room reservoir.
    """

    support: frozenset[int]
    populations: np.ndarray
    tree_sum: float
    cycle_flux: float


@dataclass(frozen=True)
class AnalyticBranches:
    """All four steady-state branches of a cycle-matched single-channel mask:
    two dark levels untouched by every kept channel, plus two three-level
    cycles.  Ordered by smallest support level, matching the numeric solver.
    """

    dark: tuple[int, int]
    triangles: tuple[TriangleBranch, TriangleBranch]

    @property
    def states(self) -> list[tuple[frozenset[int], np.ndarray]]:
        out = []
        for lvl in self.dark:
            pops = np.zeros(DIM)
            pops[lvl] = 1.0
            out.append((frozenset((lvl,)), pops))
        for tri in self.triangles:
            out.append((tri.support, tri.populations))
        return sorted(out, key=lambda sp: min(sp[0]))


def _kept_rate_triples(params, reservoirs, filt):
    """(channel, rates, weight) for the three kept channels of a
    single-channel mask."""
    channels = select_channels(transition_channels(params), filt)
    out = {}
    for ch in channels:
        rates = channel_rates(ch, reservoirs[ch.qubit])
        out[ch.qubit] = (ch, rates, ch.pair_weight)
    return out


def steady_state_branches_analytic(
    params: SystemParams,
    reservoirs: ReservoirSet,
    filt: FilterConfig | None = None,
) -> AnalyticBranches:
    """Closed-form steady states for a cycle-matched single-channel mask.

    The kept channels split the eight levels into two untouched dark levels
    and two disjoint three-level cycles; on each cycle the stationary
    populations follow from the matrix-tree formula (sums of two-factor rate
    products), so no numerical rank decisions are involved.
    """
    filt = filt if filt is not None else REVIVAL_FILTER
    match = cycle_match_check(filt)
    if not match.matched:
        raise ValueError(f"filter {filt} is not a matched cycle: {match.detail}")

    triples = _kept_rate_triples(params, reservoirs, filt)
    # edge list: (upper, lower, up_rate, down_rate) per channel
    edges = {}
    touched = set()
    for q, (ch, rates, weight) in triples.items():
        for to, frm, _ in ch.elements:
            edges.setdefault(q, []).append(
                (frm, to, weight * rates.j_plus, weight * rates.j_minus)
            )
            touched.update((frm, to))
    dark = tuple(sorted(set(range(DIM)) - touched))
    if len(dark) != 2:
        raise ValueError(f"filter {filt} does not leave exactly two dark levels")

    # group the six edges into the two triangles
    components: list[set[int]] = []
    for q in edges:
        for up, lo, _, _ in edges[q]:
            hit = [c for c in components if up in c or lo in c]
            merged = {up, lo}.union(*hit) if hit else {up, lo}
            components = [c for c in components if c not in hit] + [merged]
    components.sort(key=min)
    if len(components) != 2 or any(len(c) != 3 for c in components):
        raise ValueError(f"filter {filt} does not split into two 3-level cycles")

    triangles = []
    for comp in components:
        idx = sorted(comp)
        pos = {lvl: i for i, lvl in enumerate(idx)}
        rate = np.zeros((3, 3))
        up_product = 1.0
        down_product = 1.0
        for q, qedges in edges.items():
            for up, lo, r_up, r_down in qedges:
                if up not in comp:
                    continue
                rate[pos[lo], pos[up]] = r_down
                rate[pos[up], pos[lo]] = r_up
                # cycle orientation: absorb on H and C, emit on R
                if q in ("H", "C"):
                    up_product *= r_up
                    down_product *= r_down
                else:
                    up_product *= r_down
                    down_product *= r_up
        # matrix-tree stationary weights for a 3-state chain
        k = np.empty(3)
        for i in range(3):
            j, l = [x for x in range(3) if x != i]
            out_j = rate[:, j].sum()
            out_l = rate[:, l].sum()
            k[i] = out_j * out_l - rate[j, l] * rate[l, j]
        tree_sum = k.sum()
        pops = np.zeros(DIM)
        pops[idx] = k / tree_sum
        triangles.append(
            TriangleBranch(
                support=frozenset(comp),
                populations=pops,
                tree_sum=tree_sum,
                cycle_flux=(up_product - down_product) / tree_sum,
            )
        )
    return AnalyticBranches(dark=dark, triangles=tuple(triangles))


@dataclass(frozen=True)
class VacuumBackgroundSolution:
    """Closed-form unique steady state of the heat-conduction demo: the
    high-efficiency mask keeping (H2, R1, C3) plus a vacuum background with
    the same uniform rate on every channel."""

    populations: np.ndarray
    k: float
    l: float
    n: float
    rates: dict[tuple[str, int], ChannelRates]
    gamma: float


VACUUM_TRANSPORT_FILTER = FilterConfig.single(2, 1, 3)


def steady_state_vacuum_background_analytic(
    params: SystemParams,
    reservoirs: ReservoirSet,
    gamma: float | None = None,
) -> VacuumBackgroundSolution:
    """Closed-form populations for the (H2, R1, C3) mask with a vacuum
    background of uniform rate ``gamma`` (default: ``params.gamma``).

    The vacuum drains the four upper levels, leaving support on the four
    lowest; the populations follow a matrix-tree form in the engineered
    absorption rates j+ and the vacuum-augmented emission rates j- + gamma.
    """
    gamma = params.gamma if gamma is None else gamma
    for q in ("H", "R", "C"):
        if abs(reservoirs[q].gamma - gamma) > 0:
            raise ValueError(
                "the closed form assumes one uniform rate for engineered and "
                f"background channels; reservoir {q} has {reservoirs[q].gamma}, "
                f"background {gamma}"
            )
    triples = _kept_rate_triples(params, reservoirs, VACUUM_TRANSPORT_FILTER)
    (_, rh, _), (_, rr, _), (_, rc, _) = (triples[q] for q in ("H", "R", "C"))
    jt = lambda rates: rates.j_minus + gamma  # emission with vacuum assist

    k = rh.j_plus * rr.j_plus + 2 * rh.j_plus * rc.j_plus + 2 * rr.j_plus * jt(rc)
    l = (rr.j_plus + 2 * rc.j_plus) * jt(rh) + 2 * rc.j_plus * (jt(rr) + gamma)
    n = rh.j_plus * (jt(rr) + gamma) + 2 * (jt(rh) + jt(rr) + gamma) * jt(rc)
    denom = 3 * k + 2 * (l + n)

    pops = np.zeros(DIM)
    pops[3] = k / denom
    pops[5] = 2 * k / denom
    pops[6] = 2 * l / denom
    pops[7] = 2 * n / denom
    return VacuumBackgroundSolution(
        populations=pops,
        k=k,
        l=l,
        n=n,
        rates={r.key: rates for r, rates, _ in triples.values()},
        gamma=gamma,
    )


# ---------------------------------------------------------------------------
# Time propagation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PropagationResult:
    state: np.ndarray
    time: float
    converged: bool
    steps: int


def propagate(
    rho0: np.ndarray | DensityMatrix,
    gen: Generator,
    t_final: float,
    dt: float | None = None,
    eps_ss: float = DEFAULT_EPS_SS,
) -> PropagationResult:
    """Fixed-step 4th-order integration of d rho / dt = L rho.

    Stops early (``converged=True``) once ``||d rho / dt||_F < eps_ss``.
    The default step is 0.1 / ||L||_1, comfortably stable for these small
    dense generators; a trace drift beyond 1e-6 aborts with a diagnostic
    since it indicates an unstable step size.
    """
    rho = rho0.matrix if isinstance(rho0, DensityMatrix) else np.asarray(rho0, complex)
    liou = gen.liouvillian
    if dt is None:
        dt = 0.1 / np.linalg.norm(liou, 1)
    if dt <= 0 or t_final < 0:
        raise ValueError("need dt > 0 and t_final >= 0")

    v = rho.flatten(order="F")
    t = 0.0
    steps = 0
    converged = float(np.linalg.norm(liou @ v)) < eps_ss
    while t < t_final and not converged:
        step = min(dt, t_final - t)
        k1 = liou @ v
        k2 = liou @ (v + 0.5 * step * k1)
        k3 = liou @ (v + 0.5 * step * k2)
        k4 = liou @ (v + step * k3)
        v = v + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += step
        steps += 1
        drift = abs(np.sum(v[:: DIM + 1]) - 1.0)
        if drift > 1e-6:
            raise RuntimeError(
                f"trace drifted by {drift:.3e} after {steps} steps of dt={step:.3e}; "
                f"reduce the step size"
            )
        if float(np.linalg.norm(liou @ v)) < eps_ss:
            converged = True
    return PropagationResult(
        state=v.reshape(DIM, DIM, order="F"), time=t, converged=converged, steps=steps
    )


def branch_weights(
    rho0: np.ndarray | DensityMatrix,
    gen: Generator,
    decomposition: ComponentDecomposition | None = None,
) -> np.ndarray:
    """Long-time weight of each closed class for an initial state.

    Mass already on a closed class stays there; mass on transient levels is
    split by the exact absorption probabilities of the rate matrix.  A state
    with support on several closed classes converges to the convex mixture
    of the per-class steady states with these weights.  (For mixed-support
    initial states this mixture reading is an extrapolation beyond the
    single-branch picture; it follows from linearity of the generator.)
    """
    rho = rho0.matrix if isinstance(rho0, DensityMatrix) else np.asarray(rho0, complex)
    w = build_population_matrix(gen.dissipators)
    decomp = decomposition or invariant_components(w)
    pops = np.real(np.diag(gen.eigen.to_eigenbasis(rho)))
    weights = np.array([pops[sorted(cls)].sum() for cls in decomp.closed])
    if decomp.transient:
        tr = list(decomp.transient)
        q = w[np.ix_(tr, tr)]
        m0 = pops[tr]
        # expected occupation time of each transient level: solve (-Q) tau = m0
        tau = np.linalg.solve(-q, m0)
        for k, cls in enumerate(decomp.closed):
            into = w[np.ix_(sorted(cls), tr)].sum(axis=0)
            weights[k] += float(into @ tau)
    return weights
