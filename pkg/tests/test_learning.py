import numpy as np
import pytest

from fuzzyirt import (
    BlockSpec,
    FitnessEvaluator,
    LearnConfig,
    ParticleLayout,
    PinningMethod,
    TrainingSet,
    build_rule_base,
    decode,
    default_assessment_kb,
    encode,
    fitness,
    gfml_train,
    pfml_train,
    random_position,
    restrict,
    validate_restricted,
)
from fuzzyirt.fml import INPUT_DIRECTION
from fuzzyirt.irt import icc_array

TWO_TERM = ParticleLayout((
    BlockSpec("x", 0.0, 1.0, INPUT_DIRECTION, ("T1", "T2"), True, True),
))


def _training_set(rows=30, seed=0):
    rng = np.random.default_rng(seed)
    inputs = np.column_stack([
        rng.uniform(0.0, 2.0, rows),
        rng.uniform(-3.0, 3.0, rows),
        rng.uniform(0.0, 0.4, rows),
        rng.uniform(-3.0, 3.0, rows),
    ])
    desired = icc_array(inputs[:, 0], inputs[:, 1], inputs[:, 2], inputs[:, 3])
    return TrainingSet(inputs, desired)


class TestLayout:
    """Flattened coordinate layout of a knowledge base."""

    def test_default_kb_dimension(self):
        layout = ParticleLayout.from_system(default_assessment_kb())
        assert layout.dimension == 76
        assert layout.offsets() == [0, 12, 28, 40, 56]

    def test_shoulders_detected(self):
        layout = ParticleLayout.from_system(default_assessment_kb())
        for block in layout.blocks:
            assert block.left_shoulder
            assert block.right_shoulder

    def test_block_sizes(self):
        layout = ParticleLayout.from_system(default_assessment_kb())
        assert [b.size for b in layout.blocks] == [12, 16, 12, 16, 20]


class TestEncodeDecode:
    """Vector round trips through the layout."""

    def test_encode_order(self):
        kb = default_assessment_kb()
        vec = encode(kb, ParticleLayout.from_system(kb))
        assert vec[:4].tolist() == [0.0, 0.0, 0.65, 0.74]
        assert vec[-4:].tolist() == [0.8, 0.96, 1.0, 1.0]

    def test_decode_inverts_encode(self):
        kb = default_assessment_kb()
        layout = ParticleLayout.from_system(kb)
        assert decode(encode(kb, layout), layout) == kb

    def test_decode_checks_dimension(self):
        layout = ParticleLayout.from_system(default_assessment_kb())
        with pytest.raises(ValueError, match="76"):
            decode(np.zeros(10), layout)

    def test_encode_checks_terms(self):
        kb = default_assessment_kb()
        wrong = ParticleLayout((BlockSpec("Discrimination", 0.0, 2.0,
                                          INPUT_DIRECTION, ("Low", "High"),
                                          True, True),))
        with pytest.raises(ValueError, match="layout"):
            encode(kb, wrong)


class TestRestrict:
    """Repair of raw vectors into valid membership layouts."""

    RAW = np.array([0.9, 0.2, 0.5, 0.3, 0.1, 0.8, 0.4, 0.6])

    def test_free_endpoints_oracle(self):
        out = restrict(self.RAW, TWO_TERM, PinningMethod.FREE_ENDPOINTS)
        assert out.tolist() == [0.1, 0.2, 0.3, 0.5, 0.4, 0.6, 0.8, 0.9]

    def test_pinned_endpoints_oracle(self):
        out = restrict(self.RAW, TWO_TERM, PinningMethod.PINNED_ENDPOINTS)
        assert out.tolist() == [0.0, 0.0, 0.3, 0.5, 0.4, 0.6, 1.0, 1.0]

    def test_output_is_always_valid(self):
        rng = np.random.default_rng(17)
        layout = ParticleLayout.from_system(default_assessment_kb())
        for method in PinningMethod:
            for _ in range(100):
                raw = rng.normal(0.0, 3.0, size=layout.dimension)
                fixed = restrict(raw, layout, method)
                validate_restricted(fixed, layout, method)

    def test_idempotent(self):
        rng = np.random.default_rng(23)
        layout = ParticleLayout.from_system(default_assessment_kb())
        for method in PinningMethod:
            for _ in range(25):
                once = restrict(rng.uniform(-5, 5, layout.dimension), layout, method)
                again = restrict(once, layout, method)
                assert np.array_equal(once, again)

    def test_seed_kb_satisfies_postconditions(self):
        # trainers insert the encoded seed as-is, so it must already validate
        kb = default_assessment_kb()
        layout = ParticleLayout.from_system(kb)
        seed = encode(kb, layout)
        for method in PinningMethod:
            validate_restricted(seed, layout, method)

    def test_decoded_output_is_constructible(self):
        rng = np.random.default_rng(8)
        layout = ParticleLayout.from_system(default_assessment_kb())
        for _ in range(20):
            fixed = restrict(rng.normal(size=76), layout, PinningMethod.FREE_ENDPOINTS)
            decode(fixed, layout)

    def test_validate_flags_raw_vectors(self):
        with pytest.raises(ValueError):
            validate_restricted(self.RAW, TWO_TERM, PinningMethod.FREE_ENDPOINTS)
        free = restrict(self.RAW, TWO_TERM, PinningMethod.FREE_ENDPOINTS)
        with pytest.raises(ValueError, match="pinned"):
            validate_restricted(free, TWO_TERM, PinningMethod.PINNED_ENDPOINTS)

    def test_random_position_spans_domains(self):
        rng = np.random.default_rng(5)
        layout = ParticleLayout.from_system(default_assessment_kb())
        pos = random_position(rng, layout)
        assert pos.shape == (76,)
        assert pos[:12].min() >= 0.0 and pos[:12].max() <= 2.0
        assert pos[12:28].min() >= -4.0 and pos[12:28].max() <= 4.0


class TestTrainingSet:
    """Validation of (a, b, c, theta) -> desired rows."""

    def test_accepts_valid_rows(self):
        data = _training_set()
        assert len(data) == 30

    def test_rejects_wrong_width(self):
        with pytest.raises(ValueError, match="rows, 4"):
            TrainingSet(np.zeros((3, 3)), np.zeros(3))

    def test_rejects_empty(self):
        with pytest.raises(ValueError, match="empty"):
            TrainingSet(np.zeros((0, 4)), np.zeros(0))

    def test_rejects_out_of_domain_inputs(self):
        inputs = np.array([[3.0, 0.0, 0.2, 0.0]])
        with pytest.raises(ValueError, match="column 0"):
            TrainingSet(inputs, np.array([0.5]))

    def test_rejects_bad_desired(self):
        inputs = np.array([[1.0, 0.0, 0.2, 0.0]])
        with pytest.raises(ValueError, match="desired"):
            TrainingSet(inputs, np.array([1.5]))


class TestFitness:
    """MSE objective and its memoized evaluator."""

    def test_rule_free_kb_is_completed(self):
        data = _training_set()
        bare = fitness(default_assessment_kb(), data)
        ruled = fitness(build_rule_base(default_assessment_kb()), data)
        assert bare == ruled

    def test_seed_kb_is_imperfect_but_close(self):
        value = fitness(default_assessment_kb(), _training_set(rows=100, seed=1))
        assert 0.0 < value < 0.2

    def test_evaluator_caches_positions(self):
        kb = default_assessment_kb()
        layout = ParticleLayout.from_system(kb)
        data = _training_set()
        evaluator = FitnessEvaluator(layout, data)
        pos = encode(kb, layout)
        first = evaluator(pos)
        assert evaluator.evaluations == 1
        assert evaluator(pos.copy()) == first
        assert evaluator.evaluations == 1

    def test_evaluator_matches_fitness(self):
        kb = default_assessment_kb()
        layout = ParticleLayout.from_system(kb)
        data = _training_set()
        evaluator = FitnessEvaluator(layout, data)
        assert evaluator(encode(kb, layout)) == pytest.approx(fitness(kb, data))


class TestSwarmTrainer:
    """Swarm tuning runs: determinism, monotonicity, bookkeeping."""

    def test_history_starts_at_or_below_seed_fitness(self):
        # the seed kb is particle zero, so the initial best cannot be worse
        data = _training_set()
        cfg = LearnConfig(max_generations=2, fitness_target=0.0)
        result = pfml_train(data, cfg)
        assert result.history[0] <= fitness(default_assessment_kb(), data) + 1e-15

    def test_history_non_increasing(self):
        data = _training_set()
        cfg = LearnConfig(max_generations=3, fitness_target=0.0)
        result = pfml_train(data, cfg)
        assert len(result.history) == 4
        assert all(b <= a for a, b in zip(result.history, result.history[1:]))

    def test_metadata(self):
        data = _training_set()
        cfg = LearnConfig(max_generations=2, fitness_target=0.0, rng_seed=3)
        result = pfml_train(data, cfg)
        assert result.metadata["algorithm"] == "pso"
        assert result.metadata["method"] == "PINNED_ENDPOINTS"
        assert result.metadata["generations"] == 2
        assert result.metadata["final_fitness"] == result.history[-1]
        assert result.metadata["defuzzification"] == "centroid"

    def test_deterministic_given_seed(self):
        data = _training_set()
        cfg = LearnConfig(max_generations=2, fitness_target=0.0, rng_seed=11)
        a = pfml_train(data, cfg)
        b = pfml_train(data, cfg)
        assert np.array_equal(a.history, b.history)
        assert a.system == b.system

    def test_target_reached_stops_immediately(self):
        data = _training_set()
        result = pfml_train(data, LearnConfig(max_generations=50, fitness_target=1.0))
        assert result.metadata["generations"] == 0
        assert len(result.history) == 1

    def test_free_endpoints_method(self):
        data = _training_set()
        cfg = LearnConfig(method=PinningMethod.FREE_ENDPOINTS, max_generations=2,
                          fitness_target=0.0)
        result = pfml_train(data, cfg)
        assert result.metadata["method"] == "FREE_ENDPOINTS"
        assert len(result.system.rules) == 144

    def test_trained_system_retains_structure(self):
        data = _training_set()
        result = pfml_train(data, LearnConfig(max_generations=2, fitness_target=0.0))
        names = [v.name for v in result.system.variables]
        assert names == ["Discrimination", "Difficulty", "Guessing",
                         "Ability", "CorrectResponsePossibility"]
        assert len(result.system.rules) == 144


class TestGeneticTrainer:
    """Genetic baseline sharing the swarm contract."""

    def test_history_non_increasing(self):
        data = _training_set()
        cfg = LearnConfig(max_generations=3, fitness_target=0.0)
        result = gfml_train(data, cfg)
        assert len(result.history) == 4
        assert all(b <= a for a, b in zip(result.history, result.history[1:]))

    def test_metadata(self):
        data = _training_set()
        result = gfml_train(data, LearnConfig(max_generations=2, fitness_target=0.0))
        assert result.metadata["algorithm"] == "ga"
        assert result.metadata["generations"] == 2
        assert result.metadata["final_fitness"] == result.history[-1]

    def test_deterministic_given_seed(self):
        data = _training_set()
        cfg = LearnConfig(max_generations=2, fitness_target=0.0, rng_seed=29)
        a = gfml_train(data, cfg)
        b = gfml_train(data, cfg)
        assert np.array_equal(a.history, b.history)
        assert a.system == b.system

    def test_improves_on_seed_eventually(self):
        data = _training_set(rows=60, seed=2)
        seed_mse = fitness(default_assessment_kb(), data)
        result = gfml_train(data, LearnConfig(max_generations=15, fitness_target=0.0))
        assert result.history[-1] <= seed_mse
