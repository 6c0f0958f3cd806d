import numpy as np
import pytest

from graphmap.genetic import (
    GeneticParams,
    Population,
    _rand_index,
    _rand_index_excluding,
    best_member,
    crossover,
    ga_generation,
    init_population,
    mutate,
    replace_worst,
    select_parents,
)
from graphmap.instance import generate_random_instance
from graphmap.mapping import Solution, evaluate, is_permutation, random_mapping


class StubRng:
    """Feeds a scripted sequence of uniforms to the operators."""

    def __init__(self, values):
        self.values = list(values)

    def random(self, size=None):
        if size is None:
            return self.values.pop(0)
        out = np.array(self.values[:size])
        del self.values[:size]
        return out


def make_solutions(mappings, objectives):
    return [
        Solution(np.array(m, dtype=np.int64), f)
        for m, f in zip(mappings, objectives)
    ]


# --- params ----------------------------------------------------------------


def test_params_validation():
    with pytest.raises(ValueError):
        GeneticParams(population_size=1)
    with pytest.raises(ValueError):
        GeneticParams(population_size=4, crossover_prob=1.5)
    with pytest.raises(ValueError):
        GeneticParams(population_size=4, mutation_prob=-0.1)
    with pytest.raises(ValueError):
        GeneticParams(population_size=4, migrants=-1)
    with pytest.raises(ValueError):
        GeneticParams(population_size=4, offspring_per_iteration=0)
    with pytest.raises(ValueError):
        GeneticParams(population_size=4, iterations=-1)


def test_params_replace():
    p = GeneticParams(population_size=8)
    q = p.replace(mutation_prob=0.5)
    assert q.mutation_prob == 0.5 and p.mutation_prob == 0.001


# --- index helpers ---------------------------------------------------------


def test_rand_index_bounds_and_coverage():
    rng = np.random.default_rng(0)
    seen = {_rand_index(rng, 5) for _ in range(500)}
    assert seen == {0, 1, 2, 3, 4}
    assert _rand_index(StubRng([0.999999]), 3) == 2
    assert _rand_index(StubRng([0.0]), 3) == 0


def test_rand_index_excluding_avoids_excluded():
    rng = np.random.default_rng(1)
    for _ in range(500):
        k = _rand_index_excluding(rng, 6, (1, 4))
        assert k in {0, 2, 3, 5}
    seen = {_rand_index_excluding(rng, 4, (2,)) for _ in range(200)}
    assert seen == {0, 1, 3}


# --- crossover -------------------------------------------------------------


def test_pmx_hand_worked_example():
    a = np.array([2, 0, 4, 1, 3], dtype=np.int64)
    b = np.array([4, 3, 0, 2, 1], dtype=np.int64)
    # u=0.2 -> cut 1, u=0.5 -> cut 3: segment positions 1..3 come from a;
    # position 0 remaps b's 4 -> 0 -> 3, position 4 remaps 1 -> 2
    child = crossover(a, b, StubRng([0.2, 0.5]))
    assert list(child) == [3, 0, 4, 1, 2]


def test_pmx_keeps_segment_from_first_parent():
    rng = np.random.default_rng(4)
    for n in (2, 3, 6, 12):
        for _ in range(100):
            a = random_mapping(n, rng)
            b = random_mapping(n, rng)
            u1, u2 = rng.random(), rng.random()
            c1 = min(int(u1 * n), n - 1)
            k = min(int(u2 * (n - 1)), n - 2)
            c2 = k + 1 if k >= c1 else k
            lo, hi = min(c1, c2), max(c1, c2)
            child = crossover(a, b, StubRng([u1, u2]))
            assert is_permutation(child)
            assert np.array_equal(child[lo : hi + 1], a[lo : hi + 1])


def test_pmx_identical_parents_reproduce():
    rng = np.random.default_rng(2)
    for _ in range(50):
        a = random_mapping(7, rng)
        child = crossover(a, a.copy(), rng)
        assert np.array_equal(child, a)


def test_pmx_always_bijective():
    rng = np.random.default_rng(3)
    for _ in range(2000):
        n = int(rng.integers(2, 13))
        child = crossover(random_mapping(n, rng), random_mapping(n, rng), rng)
        assert is_permutation(child)


def test_pmx_rejects_length_mismatch():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError, match="lengths differ"):
        crossover(np.arange(4), np.arange(5), rng)


def test_pmx_does_not_modify_parents():
    rng = np.random.default_rng(5)
    a = random_mapping(8, rng)
    b = random_mapping(8, rng)
    a0, b0 = a.copy(), b.copy()
    crossover(a, b, rng)
    assert np.array_equal(a, a0) and np.array_equal(b, b0)


# --- mutation --------------------------------------------------------------


def test_mutate_zero_probability_is_identity():
    rng = np.random.default_rng(0)
    m = random_mapping(10, rng)
    out = mutate(m, 0.0, rng)
    assert np.array_equal(out, m)
    assert out is not m


def test_mutate_two_genes_full_probability_cancels():
    # both positions trigger and swap with each other, restoring the start
    m = np.array([5, 9], dtype=np.int64)
    for seed in range(20):
        out = mutate(m, 1.0, np.random.default_rng(seed))
        assert np.array_equal(out, m)


def test_mutate_preserves_bijectivity():
    rng = np.random.default_rng(6)
    for _ in range(500):
        n = int(rng.integers(2, 13))
        out = mutate(random_mapping(n, rng), 0.3, rng)
        assert is_permutation(out)


def test_mutate_touch_rate_matches_expectation():
    # each gene triggers a swap with prob p, touching ~2 positions per swap
    rng = np.random.default_rng(7)
    n, p, trials = 200, 0.02, 300
    base = np.arange(n, dtype=np.int64)
    diffs = [int((mutate(base, p, rng) != base).sum()) for _ in range(trials)]
    mean = sum(diffs) / trials
    assert 6.5 < mean < 9.5  # 2 * n * p = 8


def test_mutate_partner_is_never_self():
    # scripted trigger at position 2 with partner draw 0.5 -> k=2 -> j=3
    m = np.array([10, 11, 12, 13, 14], dtype=np.int64)
    out = mutate(m, 0.001, StubRng([0.5, 0.5, 0.0, 0.5, 0.5, 0.5]))
    assert list(out) == [10, 11, 13, 12, 14]


def test_mutate_validates_probability():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        mutate(np.arange(4), 1.5, rng)


# --- populations and selection ----------------------------------------------


def test_init_population_members_are_evaluated():
    inst = generate_random_instance(6, 30, seed=9)
    pop = init_population(inst, 8, np.random.default_rng(1))
    assert len(pop) == 8
    for member in pop.members:
        assert is_permutation(member.mapping)
        assert member.objective == evaluate(inst, member.mapping)
    with pytest.raises(ValueError):
        init_population(inst, 1, np.random.default_rng(1))


def test_population_duplicate_bookkeeping():
    sols = make_solutions([[0, 1, 2], [0, 1, 2], [2, 1, 0]], [5, 5, 9])
    pop = Population(sols)
    assert pop.contains_mapping(np.array([0, 1, 2], dtype=np.int64))
    pop.replace_member(0, Solution(np.array([1, 2, 0], dtype=np.int64), 4))
    # the twin at index 1 still holds the old mapping
    assert pop.contains_mapping(np.array([0, 1, 2], dtype=np.int64))
    pop.replace_member(1, Solution(np.array([1, 0, 2], dtype=np.int64), 6))
    assert not pop.contains_mapping(np.array([0, 1, 2], dtype=np.int64))


def test_two_member_selection_is_deterministic():
    pop = Population(make_solutions([[0, 1], [1, 0]], [10, 20]))
    for seed in range(10):
        pa, pb = select_parents(pop, np.random.default_rng(seed))
        assert pa is pop.members[0]
        assert pb is pop.members[1]


def test_selection_never_picks_the_strict_worst_of_three():
    pop = Population(make_solutions([[0, 1, 2], [1, 0, 2], [2, 0, 1]], [5, 7, 9]))
    rng = np.random.default_rng(8)
    for _ in range(300):
        pa, pb = select_parents(pop, rng)
        assert pa is not pop.members[2]
        assert pb is not pop.members[2]
        assert pa is not pb


def test_selection_prefers_better_members():
    pop = Population(make_solutions([[0, 1, 2], [1, 0, 2], [2, 0, 1]], [5, 7, 9]))
    rng = np.random.default_rng(9)
    hits = sum(select_parents(pop, rng)[0] is pop.members[0] for _ in range(2000))
    assert 0.58 < hits / 2000 < 0.75  # exact rate is 2/3


def test_selection_breaks_ties_toward_lower_index():
    pop = Population(make_solutions([[0, 1], [1, 0]], [10, 10]))
    for seed in range(10):
        pa, pb = select_parents(pop, np.random.default_rng(seed))
        assert pa is pop.members[0]
        assert pb is pop.members[1]


# --- replacement -----------------------------------------------------------


def test_replace_worst_displaces_only_the_worst():
    pop = Population(make_solutions([[0, 1, 2], [1, 0, 2], [2, 0, 1]], [5, 7, 9]))
    cand = Solution(np.array([0, 2, 1], dtype=np.int64), 6)
    replace_worst(pop, [cand])
    objs = [m.objective for m in pop.members]
    assert sorted(objs) == [5, 6, 7]
    assert pop.members[2] is cand


def test_replace_worst_requires_strict_improvement():
    pop = Population(make_solutions([[0, 1, 2], [1, 0, 2]], [5, 9]))
    tie = Solution(np.array([2, 1, 0], dtype=np.int64), 9)
    replace_worst(pop, [tie])
    assert pop.members[1].objective == 9
    assert not pop.contains_mapping(tie.mapping)


def test_replace_worst_skips_duplicate_mappings():
    pop = Population(make_solutions([[0, 1, 2], [1, 0, 2]], [5, 9]))
    echo = Solution(np.array([0, 1, 2], dtype=np.int64), 5)
    replace_worst(pop, [echo])
    assert pop.members[1].objective == 9  # nothing displaced


def test_replace_worst_applies_candidates_in_order():
    pop = Population(make_solutions([[0, 1, 2], [1, 0, 2], [2, 0, 1]], [5, 8, 9]))
    c1 = Solution(np.array([0, 2, 1], dtype=np.int64), 7)
    c2 = Solution(np.array([1, 2, 0], dtype=np.int64), 6)
    replace_worst(pop, [c1, c2])
    assert sorted(m.objective for m in pop.members) == [5, 6, 7]


def test_replace_worst_needs_candidates():
    pop = Population(make_solutions([[0, 1], [1, 0]], [1, 2]))
    with pytest.raises(ValueError):
        replace_worst(pop, [])


def test_best_member_first_of_ties():
    pop = Population(make_solutions([[0, 1, 2], [1, 0, 2], [0, 2, 1]], [7, 5, 5]))
    assert best_member(pop) is pop.members[1]


# --- generations -----------------------------------------------------------


def test_generation_without_variation_is_a_no_op():
    inst = generate_random_instance(6, 30, seed=12)
    rng = np.random.default_rng(0)
    pop = init_population(inst, 6, rng)
    before = sorted(m.mapping.tobytes() for m in pop.members)
    params = GeneticParams(population_size=6, crossover_prob=0.0, mutation_prob=0.0)
    for _ in range(20):
        ga_generation(inst, pop, params, rng)
    after = sorted(m.mapping.tobytes() for m in pop.members)
    assert before == after


def test_generation_never_worsens_the_population():
    inst = generate_random_instance(8, 50, seed=13)
    rng = np.random.default_rng(1)
    pop = init_population(inst, 10, rng)
    params = GeneticParams(population_size=10, mutation_prob=0.05)
    prev_worst = max(m.objective for m in pop.members)
    prev_best = min(m.objective for m in pop.members)
    for _ in range(50):
        ga_generation(inst, pop, params, rng)
        worst = max(m.objective for m in pop.members)
        best = min(m.objective for m in pop.members)
        assert worst <= prev_worst
        assert best <= prev_best
        assert len(pop) == 10
        prev_worst, prev_best = worst, best
    for member in pop.members:
        assert member.objective == evaluate(inst, member.mapping)


def test_generation_makes_progress_on_average():
    inst = generate_random_instance(9, 60, seed=14)
    rng = np.random.default_rng(2)
    pop = init_population(inst, 12, rng)
    start_best = best_member(pop).objective
    params = GeneticParams(population_size=12, mutation_prob=0.05)
    for _ in range(400):
        ga_generation(inst, pop, params, rng)
    assert best_member(pop).objective < start_best
