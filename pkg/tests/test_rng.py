"""The stream must match the canonical C implementation draw-for-draw; the
reference values below were produced by compiling the public-domain
xoshiro256**/splitmix64 sources and printing the first outputs."""

from annealfactor.rng import Xoshiro256, derive_seed, splitmix64

# seed 42 expanded through splitmix64, then the first eight raw draws
STATE_42 = (
    13679457532755275413,
    2949826092126892291,
    5139283748462763858,
    6349198060258255764,
)
DRAWS_42 = [
    1546998764402558742,
    6990951692964543102,
    12544586762248559009,
    17057574109182124193,
    18295552978065317476,
    14199186830065750584,
    13267978908934200754,
    15679888225317814407,
]

STATE_0 = (
    16294208416658607535,
    7960286522194355700,
    487617019471545679,
    17909611376780542444,
)
DRAWS_0 = [
    11091344671253066420,
    13793997310169335082,
    1900383378846508768,
    7684712102626143532,
]


def test_seeding_matches_reference():
    assert Xoshiro256(42).getstate() == STATE_42
    assert Xoshiro256(0).getstate() == STATE_0


def test_raw_draws_match_reference():
    rng = Xoshiro256(42)
    assert [rng.next_u64() for _ in range(8)] == DRAWS_42
    rng = Xoshiro256(0)
    assert [rng.next_u64() for _ in range(4)] == DRAWS_0


def test_splitmix_masks_to_64_bits():
    state, out = splitmix64((1 << 64) - 1)
    assert 0 <= state < 1 << 64
    assert 0 <= out < 1 << 64


def test_random_unit_interval():
    rng = Xoshiro256(7)
    values = [rng.random() for _ in range(10_000)]
    assert all(0.0 <= v < 1.0 for v in values)
    assert 0.45 < sum(values) / len(values) < 0.55


def test_randbelow_range_and_coverage():
    rng = Xoshiro256(3)
    for n in (2, 3, 7, 16, 63):
        seen = {rng.randbelow(n) for _ in range(200 * n)}
        assert seen == set(range(n))


def test_randbelow_one_consumes_nothing():
    rng = Xoshiro256(5)
    before = rng.getstate()
    assert rng.randbelow(1) == 0
    assert rng.getstate() == before


def test_state_roundtrip():
    rng = Xoshiro256(11)
    rng.next_u64()
    snapshot = rng.getstate()
    expected = [rng.next_u64() for _ in range(5)]
    rng.setstate(snapshot)
    assert [rng.next_u64() for _ in range(5)] == expected


def test_derive_seed_stable_and_sensitive():
    base = derive_seed(123, "task", 0)
    assert base == derive_seed(123, "task", 0)
    assert base != derive_seed(123, "task", 1)
    assert base != derive_seed(124, "task", 0)
    assert base != derive_seed(123, "root", 0)
    assert 0 <= base < 1 << 64
    # concatenation must not be ambiguous
    assert derive_seed("ab", "c") != derive_seed("a", "bc")
