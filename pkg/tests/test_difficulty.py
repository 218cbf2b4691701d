import random

import pytest

from reachgame.difficulty import DdaConfig, DifficultyState, Outcome, dda_update

H = Outcome.HIT
M = Outcome.MISS


def fold(outcomes, cfg=None, state=None):
    cfg = cfg or DdaConfig()
    state = state or DifficultyState.initial(cfg)
    for o in outcomes:
        state = dda_update(state, cfg, o)
    return state


def test_three_hits_shrink_once():
    cfg = DdaConfig()
    assert fold([H, H]).radius == cfg.r0
    assert fold([H, H, H]).radius == pytest.approx(0.12)


def test_three_misses_grow_once():
    assert fold([M, M]).radius == DdaConfig().r0
    assert fold([M, M, M]).radius == pytest.approx(0.1875)


def test_step_resets_both_streaks():
    s = fold([H, H, H])
    assert (s.success_streak, s.miss_streak) == (0, 0)
    s = fold([M, M, M])
    assert (s.success_streak, s.miss_streak) == (0, 0)


def test_opposite_outcome_resets_streak():
    s = fold([H, H, M])
    assert s.success_streak == 0
    assert s.miss_streak == 1
    assert s.radius == DdaConfig().r0


def test_alternating_outcomes_never_move_radius():
    s = fold([H, M] * 50)
    assert s.radius == DdaConfig().r0


def test_floor_is_absorbing():
    cfg = DdaConfig()
    s = DifficultyState(radius=cfg.r_min)
    s = fold([H] * 30, cfg=cfg, state=s)
    assert s.radius == cfg.r_min


def test_ceiling_is_absorbing():
    cfg = DdaConfig()
    s = DifficultyState(radius=cfg.r_max)
    s = fold([M] * 30, cfg=cfg, state=s)
    assert s.radius == cfg.r_max


def test_perfect_run_cascade():
    """Radius after each block of three hits, down to the floor."""
    cfg = DdaConfig()
    state = DifficultyState.initial(cfg)
    seen = []
    for _ in range(10):
        state = fold([H, H, H], cfg=cfg, state=state)
        seen.append(state.radius)
    expect = [0.12, 0.096, 0.0768, 0.06144, 0.049152, 0.0393216, 0.03145728]
    for got, want in zip(seen, expect):
        assert got == pytest.approx(want, rel=1e-12)
    assert seen[7:] == [0.03, 0.03, 0.03]


def test_miss_run_cascade():
    cfg = DdaConfig()
    state = DifficultyState.initial(cfg)
    seen = []
    for _ in range(5):
        state = fold([M, M, M], cfg=cfg, state=state)
        seen.append(state.radius)
    assert seen[0] == pytest.approx(0.1875)
    assert seen[1] == pytest.approx(0.234375)
    assert seen[2] == pytest.approx(0.29296875)
    assert seen[3] == 0.30
    assert seen[4] == 0.30


def test_radius_always_within_bounds():
    rng = random.Random(31)
    for _ in range(200):
        cfg = DdaConfig(
            r0=rng.uniform(0.05, 0.2),
            r_min=0.03,
            r_max=0.30,
            s_streak=rng.randrange(1, 5),
            f_streak=rng.randrange(1, 5),
        )
        state = DifficultyState.initial(cfg)
        for _ in range(rng.randrange(1, 60)):
            state = dda_update(state, cfg, rng.choice([H, M]))
            assert cfg.r_min <= state.radius <= cfg.r_max
            assert not (state.success_streak and state.miss_streak)


def test_monotone_under_uniform_outcomes():
    cfg = DdaConfig()
    state = DifficultyState.initial(cfg)
    prev = state.radius
    for _ in range(40):
        state = dda_update(state, cfg, H)
        assert state.radius <= prev
        prev = state.radius
    state = DifficultyState.initial(cfg)
    prev = state.radius
    for _ in range(40):
        state = dda_update(state, cfg, M)
        assert state.radius >= prev
        prev = state.radius


def test_update_matches_plain_counter_oracle():
    """Independent fold with explicit counters over random sequences."""
    rng = random.Random(88)
    for _ in range(200):
        cfg = DdaConfig()
        seq = [rng.choice([H, M]) for _ in range(rng.randrange(0, 50))]

        r, hits, misses = cfg.r0, 0, 0
        for o in seq:
            if o is H:
                hits += 1
                misses = 0
                if hits == cfg.s_streak:
                    r = max(cfg.r_min, r * cfg.alpha)
                    hits = 0
            else:
                misses += 1
                hits = 0
                if misses == cfg.f_streak:
                    r = min(cfg.r_max, r * cfg.beta)
                    misses = 0

        got = fold(seq, cfg=cfg)
        assert got.radius == r
        assert got.success_streak == hits
        assert got.miss_streak == misses


def test_config_rejects_inconsistent_values():
    with pytest.raises(ValueError):
        DdaConfig(r_min=0.2, r0=0.15)
    with pytest.raises(ValueError):
        DdaConfig(r0=0.5, r_max=0.3)
    with pytest.raises(ValueError):
        DdaConfig(alpha=1.0)
    with pytest.raises(ValueError):
        DdaConfig(beta=0.9)
    with pytest.raises(ValueError):
        DdaConfig(s_streak=0)
    with pytest.raises(ValueError):
        DdaConfig(f_streak=0)
