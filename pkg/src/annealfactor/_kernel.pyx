# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``engine_pure.run_annealing_loop``.

Factors live in 64-bit words, products in 128-bit words, so this kernel only
accepts tasks with factor lengths <= 64 and combined length <= 128 (the
caller checks). It is a line-for-line port of the pure engine: every RNG
draw, every floating-point expression, and the checkpoint bookkeeping happen
in the same order with the same operations. The parity tests compare the two
engines output-for-output; keep it that way when editing either side.
"""

from libc.math cimport INFINITY, exp
from posix.time cimport CLOCK_MONOTONIC, clock_gettime, timespec

ctypedef unsigned long long u64
ctypedef long long i64
ctypedef unsigned int u32

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_clzll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef inline double _monotonic() noexcept nogil:
    cdef timespec ts
    clock_gettime(CLOCK_MONOTONIC, &ts)
    return ts.tv_sec + ts.tv_nsec * 1e-9


# ---------------------------------------------------------------------------
# xoshiro256** stream, mirroring rng.Xoshiro256
# ---------------------------------------------------------------------------

cdef struct Rng:
    u64 s0
    u64 s1
    u64 s2
    u64 s3


cdef inline u64 _rotl(u64 x, int k) noexcept nogil:
    return (x << k) | (x >> (64 - k))


cdef inline u64 _next_u64(Rng* r) noexcept nogil:
    cdef u64 result = _rotl(r.s1 * 5ULL, 7) * 9ULL
    cdef u64 t = r.s1 << 17
    r.s2 ^= r.s0
    r.s3 ^= r.s1
    r.s1 ^= r.s2
    r.s0 ^= r.s3
    r.s2 ^= t
    r.s3 = _rotl(r.s3, 45)
    return result


cdef inline double _random(Rng* r) noexcept nogil:
    return (_next_u64(r) >> 11) * 1.1102230246251565e-16  # 2**-53


cdef inline u64 _randbelow(Rng* r, u64 n) noexcept nogil:
    cdef int bits
    cdef u64 mask, value
    if n <= 1:
        return 0
    bits = 64 - __builtin_clzll(n - 1)
    mask = ((<u64>1) << bits) - 1
    while True:
        value = _next_u64(r) & mask
        if value < n:
            return value


# ---------------------------------------------------------------------------
# moves, mirroring moves.swap_bits / slide_bits / reverse_bits / permute_bits
# ---------------------------------------------------------------------------

cdef inline int _region_low(bint lock_low) noexcept nogil:
    return 1 if lock_low else 0


cdef inline int _nth_set_bit(u64 mask, u64 nth) noexcept nogil:
    # position of the nth (0-based, ascending) set bit; caller ensures nth < popcount
    cdef u64 i
    for i in range(nth):
        mask &= mask - 1
    return __builtin_ctzll(mask)


cdef u64 _swap_bits(u64 value, int length, bint lock_low, Rng* rng) noexcept nogil:
    cdef int low = _region_low(lock_low)
    cdef int size = (length - 1) - low
    cdef u64 region_mask, set_bits, clear_bits
    cdef int ones, zeros, pos_one, pos_zero
    cdef u64 nth_one, nth_zero
    if size <= 0:
        return value
    region_mask = (((<u64>1) << size) - 1) << low
    set_bits = value & region_mask
    clear_bits = (~value) & region_mask
    ones = __builtin_popcountll(set_bits)
    zeros = size - ones
    if ones == 0 or zeros == 0:
        return value
    nth_one = _randbelow(rng, <u64>ones)
    nth_zero = _randbelow(rng, <u64>zeros)
    pos_one = _nth_set_bit(set_bits, nth_one)
    pos_zero = _nth_set_bit(clear_bits, nth_zero)
    return value ^ (((<u64>1) << pos_one) | ((<u64>1) << pos_zero))


cdef inline void _pick_range(int low, int size, Rng* rng, int* lo, int* hi) noexcept nogil:
    cdef int x = <int>_randbelow(rng, <u64>size)
    cdef int y = <int>_randbelow(rng, <u64>size)
    cdef int tmp
    if x > y:
        tmp = x
        x = y
        y = tmp
    lo[0] = low + x
    hi[0] = low + y


cdef u64 _slide_bits(u64 value, int length, bint lock_low, Rng* rng) noexcept nogil:
    cdef int low = _region_low(lock_low)
    cdef int size = (length - 1) - low
    cdef int lo, hi, span
    cdef u64 seg_mask, seg, rotated
    if size < 2:
        return value
    _pick_range(low, size, rng, &lo, &hi)
    span = hi - lo + 1
    seg_mask = (((<u64>1) << span) - 1) << lo
    seg = (value & seg_mask) >> lo
    rotated = (seg >> 1) | ((seg & 1) << (span - 1))
    return (value & ~seg_mask) | (rotated << lo)


cdef inline u64 _bit_reverse64(u64 x) noexcept nogil:
    x = ((x & 0x5555555555555555ULL) << 1) | ((x >> 1) & 0x5555555555555555ULL)
    x = ((x & 0x3333333333333333ULL) << 2) | ((x >> 2) & 0x3333333333333333ULL)
    x = ((x & 0x0F0F0F0F0F0F0F0FULL) << 4) | ((x >> 4) & 0x0F0F0F0F0F0F0F0FULL)
    x = ((x & 0x00FF00FF00FF00FFULL) << 8) | ((x >> 8) & 0x00FF00FF00FF00FFULL)
    x = ((x & 0x0000FFFF0000FFFFULL) << 16) | ((x >> 16) & 0x0000FFFF0000FFFFULL)
    return (x << 32) | (x >> 32)


cdef u64 _reverse_bits(u64 value, int length, bint lock_low, Rng* rng) noexcept nogil:
    cdef int low = _region_low(lock_low)
    cdef int size = (length - 1) - low
    cdef int lo, hi, span
    cdef u64 seg_mask, seg, mirrored
    if size < 2:
        return value
    _pick_range(low, size, rng, &lo, &hi)
    span = hi - lo + 1
    seg_mask = (((<u64>1) << span) - 1) << lo
    seg = (value & seg_mask) >> lo
    mirrored = _bit_reverse64(seg) >> (64 - span)
    return (value & ~seg_mask) | (mirrored << lo)


cdef u64 _permute_bits(u64 value, int length, bint lock_low, Rng* rng) noexcept nogil:
    cdef int low = _region_low(lock_low)
    cdef int size = (length - 1) - low
    cdef int pick_max, count, t, r, tmp
    cdef int positions[64]
    cdef int digits[64]
    cdef u64 out
    if size < 2:
        return value
    pick_max = (size + 3) // 4
    if pick_max < 2:
        pick_max = 2
    count = 2 + <int>_randbelow(rng, <u64>(pick_max - 1))
    for t in range(size):
        positions[t] = low + t
    for t in range(count):
        r = t + <int>_randbelow(rng, <u64>(size - t))
        tmp = positions[t]
        positions[t] = positions[r]
        positions[r] = tmp
    for t in range(count):
        digits[t] = <int>((value >> positions[t]) & 1)
    for t in range(count - 1, 0, -1):
        r = <int>_randbelow(rng, <u64>(t + 1))
        tmp = digits[t]
        digits[t] = digits[r]
        digits[r] = tmp
    out = value
    for t in range(count):
        out = (out & ~((<u64>1) << positions[t])) | ((<u64>digits[t]) << positions[t])
    return out


cdef u64 _apply_move(int kind, u64 value, int length, bint lock_low, Rng* rng) noexcept nogil:
    if kind == 0:
        return _swap_bits(value, length, lock_low, rng)
    if kind == 1:
        return _slide_bits(value, length, lock_low, rng)
    if kind == 2:
        return _reverse_bits(value, length, lock_low, rng)
    return _permute_bits(value, length, lock_low, rng)


# ---------------------------------------------------------------------------
# energy and popcount on 128-bit products
# ---------------------------------------------------------------------------

cdef inline int _popcount128(u128 x) noexcept nogil:
    return __builtin_popcountll(<u64>x) + __builtin_popcountll(<u64>(x >> 64))


cdef inline u64 _energy128(u128 product, u128 target, u128 mask, const u32* weights) noexcept nogil:
    cdef u128 agree = (~(product ^ target)) & mask
    cdef u64 lo = <u64>agree
    cdef u64 hi = <u64>(agree >> 64)
    cdef u64 total = 0
    while lo:
        total += weights[__builtin_ctzll(lo)]
        lo &= lo - 1
    while hi:
        total += weights[64 + __builtin_ctzll(hi)]
        hi &= hi - 1
    return total


# ---------------------------------------------------------------------------
# the annealing loop
# ---------------------------------------------------------------------------

def run_annealing_loop(
    unsigned long long target_lo,
    unsigned long long target_hi,
    int n_bits,
    int target_popcount,
    unsigned int[:] weights,
    unsigned long long value_a,
    int len_a,
    unsigned long long value_b,
    int len_b,
    unsigned long long energy0,
    double cooling_factor,
    double start_temperature,
    unsigned long long boltzmann_k,
    long long max_steps,
    long long step_budget,
    double bad_move_fraction,
    long long revert_patience,
    bint popcount_filter,
    bint paper_metropolis,
    bint lock_low,
    double[:] move_weights,
    unsigned long long[:] rng_state,
    int[:] cancel,
    double deadline,
):
    """Run the annealing loop; returns the same fields as LoopResult as a tuple.

    ``rng_state`` is advanced in place so the caller's stream continues
    exactly where the kernel stopped.
    """
    if n_bits < 1 or n_bits > 128:
        raise ValueError("kernel supports targets of 1..128 binary digits")
    if len_a > 64 or len_b > 64 or len_a + len_b > 128:
        raise ValueError("kernel supports factor lengths up to 64 bits, 128 combined")
    if weights.shape[0] < n_bits:
        raise ValueError("weights must cover every target digit")

    cdef u128 target = ((<u128>target_hi) << 64) | (<u128>target_lo)
    cdef u128 mask
    if n_bits == 128:
        mask = ~(<u128>0)
    else:
        mask = ((<u128>1) << n_bits) - 1

    cdef u32 wbuf[128]
    cdef u64 full_energy = 0
    cdef int i
    for i in range(n_bits):
        wbuf[i] = weights[i]
        full_energy += weights[i]

    cdef double w0 = move_weights[0]
    cdef double w1 = move_weights[1]
    cdef double w2 = move_weights[2]

    cdef Rng rng
    rng.s0 = rng_state[0]
    rng.s1 = rng_state[1]
    rng.s2 = rng_state[2]
    rng.s3 = rng_state[3]

    cdef u64 va = value_a
    cdef u64 vb = value_b
    cdef u64 e = energy0
    cdef double t = start_temperature
    cdef double fc = cooling_factor
    cdef u64 boltz = boltzmann_k
    cdef double delta = bad_move_fraction
    cdef i64 patience = revert_patience
    cdef bint use_filter = popcount_filter
    cdef bint paper_rule = paper_metropolis
    cdef bint lock = lock_low
    cdef bint finite_deadline = deadline != INFINITY

    cdef i64 tried = 0, accepted = 0, rejected = 0, reverted = 0, filtered = 0
    cdef bint ck_active = False
    cdef u64 ck_a = 0, ck_b = 0, ck_e = 0
    cdef i64 ck_left = 0

    cdef bint found = False
    cdef bint was_cancelled = False
    cdef i64 steps_done = 0
    cdef i64 step = 0, j
    cdef bint arming, ok, mutate_b
    cdef int kind
    cdef double u, acc, kt, p_accept
    cdef u64 pa, pb, e2
    cdef u128 product

    with nogil:
        while step < max_steps:
            if cancel[0] != 0 or (finite_deadline and _monotonic() >= deadline):
                was_cancelled = True
                steps_done = step
                break
            j = 0
            while j < step_budget:
                j += 1
                tried += 1
                arming = False
                mutate_b = _randbelow(&rng, 2) != 0
                u = _random(&rng)
                kind = 0
                acc = w0
                if u >= acc:
                    kind = 1
                    acc += w1
                    if u >= acc:
                        kind = 2
                        acc += w2
                        if u >= acc:
                            kind = 3
                if mutate_b:
                    pa = va
                    pb = _apply_move(kind, vb, len_b, lock, &rng)
                else:
                    pa = _apply_move(kind, va, len_a, lock, &rng)
                    pb = vb
                product = (<u128>pa) * (<u128>pb)
                if use_filter and _popcount128(product) != target_popcount:
                    filtered += 1
                else:
                    if product == target:
                        found = True
                        steps_done = step + 1
                        va = pa
                        vb = pb
                        e = full_energy
                        break
                    e2 = _energy128(product, target, mask, wbuf)
                    if e2 >= e:
                        ok = True
                    elif delta > 0.0 and <double>(<i64>e - <i64>e2) > delta * <double>e:
                        ok = False
                    else:
                        kt = <double>boltz * t
                        if kt <= 0.0:
                            ok = False
                        else:
                            if paper_rule:
                                p_accept = exp(-((<double>(<i64>e2 - <i64>e)) / kt))
                            else:
                                p_accept = exp((<double>(<i64>e2 - <i64>e)) / kt)
                            ok = _random(&rng) < p_accept
                    if ok:
                        if e2 < e and patience > 0 and not ck_active:
                            ck_active = True
                            ck_a = va
                            ck_b = vb
                            ck_e = e
                            ck_left = patience
                            arming = True
                        va = pa
                        vb = pb
                        e = e2
                        accepted += 1
                    else:
                        rejected += 1
                # checkpoint bookkeeping; the arming proposal itself does not tick
                if ck_active and not arming:
                    if e > ck_e:
                        ck_active = False
                    else:
                        ck_left -= 1
                        if ck_left == 0:
                            va = ck_a
                            vb = ck_b
                            e = ck_e
                            ck_active = False
                            reverted += 1
            if found:
                break
            t = t * fc
            step += 1
        if not found and not was_cancelled:
            steps_done = max_steps

    rng_state[0] = rng.s0
    rng_state[1] = rng.s1
    rng_state[2] = rng.s2
    rng_state[3] = rng.s3

    return (
        found,
        int(va),
        int(vb),
        int(e),
        t,
        int(steps_done),
        int(tried),
        int(accepted),
        int(rejected),
        int(reverted),
        int(filtered),
        was_cancelled,
    )
