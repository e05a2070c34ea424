"""Membership-function tuning by particle swarm and genetic search.

A candidate solution flattens every fuzzy set of the knowledge base
into (BS, BC, EC, ES) runs, 76 coordinates for the assessment system.
After every move a dynamic restriction pass (clamp, sort, boundary
exchange, optional endpoint pinning) repairs the vector so it always
decodes into a structurally valid knowledge base.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .fml import (
    FuzzySet,
    FuzzySystem,
    FuzzyVariable,
    build_rule_base,
    default_assessment_kb,
    infer_batch,
)

ASSESSMENT_INPUT_DOMAINS = ((0.0, 2.0), (-4.0, 4.0), (0.0, 1.0), (-4.0, 4.0))


class PinningMethod(enum.Enum):
    """How the restriction pass treats block endpoints.

    FREE_ENDPOINTS leaves the outermost parameters wherever clamp and
    sort put them; PINNED_ENDPOINTS forces the first term's BS (plus BC
    for seed left-shoulder terms) onto domain_left and the last term's
    ES (plus EC for right-shoulder terms) onto domain_right.
    """

    FREE_ENDPOINTS = 1
    PINNED_ENDPOINTS = 2


@dataclass(frozen=True)
class BlockSpec:
    """Layout of one fuzzy variable inside the flat parameter vector."""

    name: str
    domain_left: float
    domain_right: float
    direction: str
    term_names: tuple[str, ...]
    left_shoulder: bool
    right_shoulder: bool

    @property
    def n_terms(self) -> int:
        return len(self.term_names)

    @property
    def size(self) -> int:
        return 4 * len(self.term_names)


@dataclass(frozen=True)
class ParticleLayout:
    """Block structure of the flattened knowledge base."""

    blocks: tuple[BlockSpec, ...]

    @property
    def dimension(self) -> int:
        return sum(b.size for b in self.blocks)

    def offsets(self) -> list[int]:
        out, acc = [], 0
        for b in self.blocks:
            out.append(acc)
            acc += b.size
        return out

    @classmethod
    def from_system(cls, system: FuzzySystem) -> "ParticleLayout":
        blocks = []
        for var in system.variables:
            first, last = var.sets[0], var.sets[-1]
            blocks.append(BlockSpec(
                name=var.name,
                domain_left=var.domain_left,
                domain_right=var.domain_right,
                direction=var.direction,
                term_names=tuple(s.name for s in var.sets),
                left_shoulder=(first.bs == first.bc == var.domain_left),
                right_shoulder=(last.ec == last.es == var.domain_right),
            ))
        return cls(tuple(blocks))


def encode(system: FuzzySystem, layout: ParticleLayout) -> np.ndarray:
    """Flatten the knowledge base into the layout's coordinate vector."""
    parts = []
    for block in layout.blocks:
        var = system.variable(block.name)
        if tuple(s.name for s in var.sets) != block.term_names:
            raise ValueError(f"variable {block.name!r} does not match the layout")
        for s in var.sets:
            parts.extend(s.points)
    return np.array(parts, dtype=float)


def decode(position: np.ndarray, layout: ParticleLayout) -> FuzzySystem:
    """Rebuild a (rule-free) knowledge base from a coordinate vector."""
    position = np.asarray(position, dtype=float)
    if position.shape != (layout.dimension,):
        raise ValueError(
            f"position must have {layout.dimension} coordinates, got {position.shape}"
        )
    variables = []
    offset = 0
    for block in layout.blocks:
        sets = []
        for name in block.term_names:
            bs, bc, ec, es = position[offset:offset + 4]
            sets.append(FuzzySet(name, bs, bc, ec, es))
            offset += 4
        variables.append(FuzzyVariable(block.name, block.domain_left,
                                       block.domain_right, block.direction,
                                       tuple(sets)))
    return FuzzySystem(tuple(variables))


def restrict(position: np.ndarray, layout: ParticleLayout,
             method: PinningMethod) -> np.ndarray:
    """Repair a raw vector into a valid membership-function layout.

    Per block: clamp into the domain, sort ascending, deal the sorted
    values out as consecutive (BS, BC, EC, ES) runs, then exchange each
    term's BS with its predecessor's ES so adjacent terms overlap.
    PINNED_ENDPOINTS additionally nails the block edges to the domain.
    """
    position = np.asarray(position, dtype=float)
    if position.shape != (layout.dimension,):
        raise ValueError(
            f"position must have {layout.dimension} coordinates, got {position.shape}"
        )
    out = position.copy()
    offset = 0
    for block in layout.blocks:
        seg = np.clip(out[offset:offset + block.size],
                      block.domain_left, block.domain_right)
        seg.sort()
        for j in range(1, block.n_terms):
            i = 4 * j
            seg[i - 1], seg[i] = seg[i], seg[i - 1]
        if method is PinningMethod.PINNED_ENDPOINTS:
            seg[0] = block.domain_left
            if block.left_shoulder:
                seg[1] = block.domain_left
            seg[-1] = block.domain_right
            if block.right_shoulder:
                seg[-2] = block.domain_right
        out[offset:offset + block.size] = seg
        offset += block.size
    return out


def validate_restricted(position: np.ndarray, layout: ParticleLayout,
                        method: PinningMethod) -> None:
    """Raise if ``position`` violates the restriction post-conditions."""
    position = np.asarray(position, dtype=float)
    offset = 0
    for block in layout.blocks:
        seg = position[offset:offset + block.size]
        if (seg < block.domain_left).any() or (seg > block.domain_right).any():
            raise ValueError(f"block {block.name!r} leaves its domain")
        terms = seg.reshape(block.n_terms, 4)
        if (np.diff(terms, axis=1) < 0).any():
            raise ValueError(f"block {block.name!r} has a non-ascending term")
        if block.n_terms > 1 and (terms[1:, 0] > terms[:-1, 3]).any():
            raise ValueError(f"block {block.name!r} has non-overlapping neighbours")
        if method is PinningMethod.PINNED_ENDPOINTS:
            if seg[0] != block.domain_left or seg[-1] != block.domain_right:
                raise ValueError(f"block {block.name!r} endpoints are not pinned")
            if block.left_shoulder and seg[1] != block.domain_left:
                raise ValueError(f"block {block.name!r} left shoulder is not pinned")
            if block.right_shoulder and seg[-2] != block.domain_right:
                raise ValueError(f"block {block.name!r} right shoulder is not pinned")
        offset += block.size


def random_position(rng: np.random.Generator, layout: ParticleLayout) -> np.ndarray:
    """Uniform draw of every coordinate inside its block's domain."""
    parts = [rng.uniform(b.domain_left, b.domain_right, size=b.size)
             for b in layout.blocks]
    return np.concatenate(parts)


@dataclass(frozen=True)
class TrainingSet:
    """Rows of (a, b, c, theta) inputs with a desired probability each."""

    inputs: np.ndarray
    desired: np.ndarray

    def __post_init__(self):
        inputs = np.asarray(self.inputs, dtype=float)
        desired = np.asarray(self.desired, dtype=float)
        if inputs.ndim != 2 or inputs.shape[1] != len(ASSESSMENT_INPUT_DOMAINS):
            raise ValueError("inputs must be a (rows, 4) array of a, b, c, theta")
        if inputs.shape[0] == 0:
            raise ValueError("training set must not be empty")
        if desired.shape != (inputs.shape[0],):
            raise ValueError("desired must be one value per input row")
        if not np.isfinite(inputs).all() or not np.isfinite(desired).all():
            raise ValueError("training data must be finite")
        for j, (lo, hi) in enumerate(ASSESSMENT_INPUT_DOMAINS):
            if (inputs[:, j] < lo).any() or (inputs[:, j] > hi).any():
                raise ValueError(f"input column {j} outside [{lo}, {hi}]")
        if (desired < 0.0).any() or (desired > 1.0).any():
            raise ValueError("desired outputs must lie in [0, 1]")
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "desired", desired)

    def __len__(self) -> int:
        return self.inputs.shape[0]


def fitness(system: FuzzySystem, data: TrainingSet) -> float:
    """Mean squared error of the system's output against desired values.

    A rule-free knowledge base gets its rule base generated first.
    """
    if not system.rules:
        system = build_rule_base(system)
    values, _ = infer_batch(system, data.inputs)
    return float(np.mean((values - data.desired) ** 2))


class FitnessEvaluator:
    """Decode + rule regeneration + batch inference, memoized by position.

    Moving the fuzzy sets can flip rule consequents, so the rule base is
    regenerated from the decoded knowledge base for every new position.
    """

    def __init__(self, layout: ParticleLayout, data: TrainingSet):
        self.layout = layout
        self.data = data
        self._cache: dict[bytes, float] = {}
        self.evaluations = 0

    def __call__(self, position: np.ndarray) -> float:
        key = position.tobytes()
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        self.evaluations += 1
        system = build_rule_base(decode(position, self.layout))
        values, _ = infer_batch(system, self.data.inputs)
        mse = float(np.mean((values - self.data.desired) ** 2))
        self._cache[key] = mse
        return mse


@dataclass
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    best_position: np.ndarray
    best_fitness: float


@dataclass
class Swarm:
    particles: list[Particle]
    g_best_position: np.ndarray
    g_best_fitness: float
    w: float = 0.0
    c1: float = 2.0
    c2: float = 2.0


@dataclass(frozen=True)
class LearnConfig:
    """Shared knobs of the swarm and genetic trainers."""

    method: PinningMethod = PinningMethod.PINNED_ENDPOINTS
    max_generations: int = 1000
    fitness_target: float = 0.001
    rng_seed: int = 0
    swarm_size: int = 20
    w: float = 0.0
    c1: float = 2.0
    c2: float = 2.0
    per_coordinate_r: bool = True
    crossover_rate: float = 0.8
    mutation_rate: float = 0.1
    mutation_sd_fraction: float = 0.05
    tournament_size: int = 2
    elite_count: int = 1

    def __post_init__(self):
        if self.max_generations < 0:
            raise ValueError("max_generations must be non-negative")
        if self.swarm_size < 1:
            raise ValueError("swarm_size must be positive")


@dataclass(frozen=True)
class TrainResult:
    system: FuzzySystem
    history: np.ndarray
    metadata: dict


def pso_step(swarm: Swarm, data: TrainingSet, layout: ParticleLayout,
             method: PinningMethod, rng: np.random.Generator,
             per_coordinate_r: bool = True,
             evaluator: FitnessEvaluator | None = None) -> Swarm:
    """One synchronous swarm generation.

    Every velocity update reads the generation-start global best; the
    personal/global bests are then folded sequentially by particle
    index, which keeps runs reproducible. Attraction coefficients r1,
    r2 are drawn per coordinate by default; the scalar variant confines
    each move to the plane of the two difference vectors and stalls in
    this 76-dimensional space.
    """
    evaluator = evaluator or FitnessEvaluator(layout, data)
    g_best = swarm.g_best_position.copy()
    dim = layout.dimension
    for particle in swarm.particles:
        if per_coordinate_r:
            r1 = rng.random(dim)
            r2 = rng.random(dim)
        else:
            r1 = rng.random()
            r2 = rng.random()
        velocity = (swarm.w * particle.velocity
                    + swarm.c1 * r1 * (particle.best_position - particle.position)
                    + swarm.c2 * r2 * (g_best - particle.position))
        particle.velocity = velocity
        if np.any(velocity != 0.0):
            particle.position = restrict(particle.position + velocity, layout, method)
    for particle in swarm.particles:
        value = evaluator(particle.position)
        if value < particle.best_fitness:
            particle.best_fitness = value
            particle.best_position = particle.position.copy()
    for particle in swarm.particles:
        if particle.best_fitness < swarm.g_best_fitness:
            swarm.g_best_fitness = particle.best_fitness
            swarm.g_best_position = particle.best_position.copy()
    return swarm


def _initial_positions(seed_kb: FuzzySystem, layout: ParticleLayout,
                       cfg: LearnConfig, rng: np.random.Generator) -> list[np.ndarray]:
    seed = encode(seed_kb, layout)
    validate_restricted(seed, layout, cfg.method)
    positions = [seed]
    for _ in range(cfg.swarm_size - 1):
        positions.append(restrict(random_position(rng, layout), layout, cfg.method))
    return positions


def pfml_train(data: TrainingSet, cfg: LearnConfig | None = None,
               seed_kb: FuzzySystem | None = None) -> TrainResult:
    """Tune the knowledge base by particle swarm.

    The swarm starts from one encoded seed knowledge base plus
    randomized-and-restricted particles; iteration stops once the best
    MSE drops below ``cfg.fitness_target`` or the generation count
    exceeds ``cfg.max_generations``.
    """
    cfg = cfg or LearnConfig()
    seed_kb = seed_kb if seed_kb is not None else default_assessment_kb()
    layout = ParticleLayout.from_system(seed_kb)
    rng = np.random.default_rng(cfg.rng_seed)
    evaluator = FitnessEvaluator(layout, data)
    particles = []
    for pos in _initial_positions(seed_kb, layout, cfg, rng):
        value = evaluator(pos)
        particles.append(Particle(position=pos, velocity=np.zeros(layout.dimension),
                                  best_position=pos.copy(), best_fitness=value))
    best = min(range(len(particles)), key=lambda i: particles[i].best_fitness)
    swarm = Swarm(particles=particles,
                  g_best_position=particles[best].best_position.copy(),
                  g_best_fitness=particles[best].best_fitness,
                  w=cfg.w, c1=cfg.c1, c2=cfg.c2)
    history = [swarm.g_best_fitness]
    generation = 0
    while generation < cfg.max_generations and swarm.g_best_fitness >= cfg.fitness_target:
        pso_step(swarm, data, layout, cfg.method, rng,
                 per_coordinate_r=cfg.per_coordinate_r, evaluator=evaluator)
        generation += 1
        history.append(swarm.g_best_fitness)
    system = build_rule_base(decode(swarm.g_best_position, layout))
    metadata = {
        "algorithm": "pso",
        "method": cfg.method.name,
        "generations": generation,
        "swarm_size": cfg.swarm_size,
        "seeded_particle": True,
        "defuzzification": "centroid",
        "fitness_evaluations": evaluator.evaluations,
        "final_fitness": swarm.g_best_fitness,
    }
    return TrainResult(system=system, history=np.array(history), metadata=metadata)


def gfml_train(data: TrainingSet, cfg: LearnConfig | None = None,
               seed_kb: FuzzySystem | None = None) -> TrainResult:
    """Real-coded genetic baseline sharing the swarm trainer's contract.

    Tournament selection, uniform crossover, per-coordinate Gaussian
    mutation scaled to each block's domain width, and single-individual
    elitism; encoding, restriction, fitness and termination match
    :func:`pfml_train`.
    """
    cfg = cfg or LearnConfig()
    seed_kb = seed_kb if seed_kb is not None else default_assessment_kb()
    layout = ParticleLayout.from_system(seed_kb)
    rng = np.random.default_rng(cfg.rng_seed)
    evaluator = FitnessEvaluator(layout, data)
    population = _initial_positions(seed_kb, layout, cfg, rng)
    values = [evaluator(p) for p in population]
    mutation_sd = np.concatenate([
        np.full(b.size, cfg.mutation_sd_fraction * (b.domain_right - b.domain_left))
        for b in layout.blocks
    ])
    dim = layout.dimension

    def tournament() -> int:
        picks = rng.integers(0, len(population), size=cfg.tournament_size)
        best = picks[0]
        for i in picks[1:]:
            if values[i] < values[best]:
                best = i
        return int(best)

    best_idx = min(range(len(values)), key=lambda i: values[i])
    history = [values[best_idx]]
    generation = 0
    while generation < cfg.max_generations and history[-1] >= cfg.fitness_target:
        elite_order = sorted(range(len(values)), key=lambda i: values[i])
        next_pop = [population[i].copy() for i in elite_order[:cfg.elite_count]]
        while len(next_pop) < cfg.swarm_size:
            p1 = tournament()
            p2 = tournament()
            if rng.random() < cfg.crossover_rate:
                mask = rng.random(dim) < 0.5
                child = np.where(mask, population[p1], population[p2])
            else:
                child = population[p1].copy()
            mutate = rng.random(dim) < cfg.mutation_rate
            noise = rng.normal(0.0, mutation_sd)
            child = np.where(mutate, child + noise, child)
            next_pop.append(restrict(child, layout, cfg.method))
        population = next_pop
        values = [evaluator(p) for p in population]
        generation += 1
        history.append(min(history[-1], min(values)))
    best_idx = min(range(len(values)), key=lambda i: values[i])
    system = build_rule_base(decode(population[best_idx], layout))
    metadata = {
        "algorithm": "ga",
        "method": cfg.method.name,
        "generations": generation,
        "population_size": cfg.swarm_size,
        "seeded_particle": True,
        "defuzzification": "centroid",
        "fitness_evaluations": evaluator.evaluations,
        "final_fitness": history[-1],
    }
    return TrainResult(system=system, history=np.array(history), metadata=metadata)
