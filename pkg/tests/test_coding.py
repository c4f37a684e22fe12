import numpy as np
import pytest

from fsmac import (
    Codebooks,
    ConferencingConfig,
    DmcChannel,
    InputPolicy,
    MarkovChain,
    assemble_joint,
    conferencing_error_rate,
    decode_joint_typicality,
    delayed_sequences,
    delayed_state_joint,
    encode,
    estimate_error_rate,
    generate_codebooks,
    merge_messages,
    message_count,
    simulate_channel,
    split_messages,
)
from fsmac.coding import candidate_sequences


def two_state(g=0.1, b=0.1):
    return MarkovChain(["G", "B"], [[1 - b, b], [g, 1 - g]])


def single_state():
    return MarkovChain(["s"], [[1.0]])


def uniform_policy(k, nu=1, nx1=2, nx2=2):
    return InputPolicy(
        np.full((k, nu), 1.0 / nu),
        np.full((nu, k, nx1), 1.0 / nx1),
        np.full((nu, k, k, nx2), 1.0 / nx2),
    )


def point_mass_policy(k, nu=1):
    # u = 0 always, x1 = observed-state parity, x2 = 1
    pU = np.zeros((k, nu))
    pU[:, 0] = 1.0
    pX1 = np.zeros((nu, k, 2))
    for a in range(k):
        pX1[0, a, a % 2] = 1.0
    pX2 = np.zeros((nu, k, k, 2))
    pX2[..., 1] = 1.0
    return InputPolicy(pU, pX1, pX2)


def copy_pair_channel(k):
    t = np.zeros((2, 2, k, 4))
    for x1 in range(2):
        for x2 in range(2):
            t[x1, x2, :, 2 * x1 + x2] = 1.0
    return DmcChannel(t)


def uniform_noise_channel(k, ny=2):
    return DmcChannel(np.full((2, 2, k, ny), 1.0 / ny))


def xor_bsc_channel(k, crossovers):
    t = np.zeros((2, 2, k, 2))
    for s, p in enumerate(crossovers):
        for x1 in range(2):
            for x2 in range(2):
                t[x1, x2, s, (x1 + x2) % 2] = 1.0 - p
                t[x1, x2, s, (x1 + x2 + 1) % 2] = p
    return DmcChannel(t)


class TestMessageCount:
    def test_floor_with_minimum_one(self):
        assert message_count(8, 0.0) == 1
        assert message_count(8, 0.5) == 16
        assert message_count(10, 0.33) == int(np.floor(2 ** 3.3))

    def test_integer_powers_exact(self):
        assert message_count(100, 0.1) == 2**10

    def test_negative_rate_rejected(self):
        with pytest.raises(ValueError):
            message_count(8, -0.1)


class TestGenerateCodebooks:
    def test_shapes_and_sizes(self):
        books = generate_codebooks(uniform_policy(2, nu=2), 16, (0.125, 0.25, 0.25), seed=0)
        assert books.sizes == (4, 16, 16)
        assert books.t0.shape == (4, 16, 2)
        assert books.t1.shape == (16, 16, 2, 2)
        assert books.t2.shape == (16, 16, 2, 2, 2)

    def test_zero_rates_single_codeword(self):
        books = generate_codebooks(uniform_policy(2), 8, (0.0, 0.0, 0.0), seed=1)
        assert books.sizes == (1, 1, 1)

    def test_seed_reproducibility(self):
        p = uniform_policy(2, nu=2)
        a = generate_codebooks(p, 32, (0.1, 0.2, 0.2), seed=7)
        b = generate_codebooks(p, 32, (0.1, 0.2, 0.2), seed=7)
        assert np.array_equal(a.t0, b.t0)
        assert np.array_equal(a.t1, b.t1)
        assert np.array_equal(a.t2, b.t2)

    def test_point_mass_policy_constant_books(self):
        p = point_mass_policy(2)
        a = generate_codebooks(p, 16, (0.0, 0.25, 0.25), seed=3)
        b = generate_codebooks(p, 16, (0.0, 0.25, 0.25), seed=99)
        assert np.array_equal(a.t1, b.t1)  # degenerate sampling ignores the seed
        assert np.array_equal(a.t1[:, :, 0, 0], np.zeros_like(a.t1[:, :, 0, 0]))
        assert np.array_equal(a.t1[:, :, 0, 1], np.ones_like(a.t1[:, :, 0, 1]))

    def test_empirical_row_frequencies(self):
        # each codeword component is i.i.d. from its conditional row
        pU = np.array([[1.0], [1.0]])
        pX1 = np.array([[[0.3, 0.7], [0.8, 0.2]]])
        pX2 = np.full((1, 2, 2, 2), 0.5)
        policy = InputPolicy(pU, pX1, pX2)
        n = 10_000
        books = generate_codebooks(policy, n, (0.0, 0.0, 0.0), seed=5)
        for a in range(2):
            freq1 = (books.t1[0, :, 0, a] == 1).mean()
            p = pX1[0, a, 1]
            assert abs(freq1 - p) <= 3 * np.sqrt(p * (1 - p) / n)


class TestEncode:
    def test_all_fill_when_no_observation(self):
        books = generate_codebooks(uniform_policy(2), 8, (0.0, 0.125, 0.125), seed=0)
        sd1, sd2 = delayed_sequences(np.zeros(8, dtype=int), 8, 8)
        x1, x2 = encode(books, 0, 0, 0, sd1, sd2, 8, 8)
        assert np.array_equal(x1, np.zeros(8, dtype=int))
        assert np.array_equal(x2, np.zeros(8, dtype=int))

    def test_single_state_collapse(self):
        books = generate_codebooks(uniform_policy(1), 12, (0.0, 0.25, 0.25), seed=2)
        s = np.zeros(12, dtype=int)
        sd1, sd2 = delayed_sequences(s, 0, 0)
        x1, x2 = encode(books, 0, 2, 1, sd1, sd2, 0, 0)
        pos = np.arange(12)
        u = books.t0[0, pos, 0]
        assert np.array_equal(x1, books.t1[2, pos, u, 0])
        assert np.array_equal(x2, books.t2[1, pos, u, 0, 0])

    def test_manual_trace_two_states(self):
        # written-out codebooks, one message each, n = 3, delays (1, 0)
        policy = uniform_policy(2, nu=2)
        t0 = np.array([[[0, 1], [1, 0], [1, 1]]])          # t0[0, i, observed]
        t1 = np.zeros((1, 3, 2, 2), dtype=np.int64)        # t1[0, i, u, observed]
        t1[0, 1, 1, 1] = 1                                  # the one consulted cell at i=1
        t1[0, 2, 1, 0] = 1                                  # consulted at i=2
        t2 = np.zeros((1, 3, 2, 2, 2), dtype=np.int64)
        t2[0, 1, 1, 1, 0] = 1
        t2[0, 2, 1, 0, 1] = 0
        books = Codebooks(policy, t0, t1, t2, 3, seed=None)
        s = np.array([1, 0, 1])
        sd1, sd2 = delayed_sequences(s, 1, 0)
        x1, x2 = encode(books, 0, 0, 0, sd1, sd2, 1, 0)
        # i=0: fill. i=1: observed=s[0]=1, u=t0[0,1,1]=0 -> x1=t1[0,1,0,1]=0,
        # x2=t2[0,1,0,1,0]=0. i=2: observed=s[1]=0, u=t0[0,2,0]=1 ->
        # x1=t1[0,2,1,0]=1, x2=t2[0,2,1,0,1]=0.
        assert np.array_equal(x1, [0, 0, 1])
        assert np.array_equal(x2, [0, 0, 0])

    def test_message_out_of_range(self):
        books = generate_codebooks(uniform_policy(2), 8, (0.0, 0.125, 0.125), seed=0)
        sd1, sd2 = delayed_sequences(np.zeros(8, dtype=int), 1, 0)
        with pytest.raises(ValueError, match="m1"):
            encode(books, 0, 99, 0, sd1, sd2, 1, 0)


class TestSimulateChannel:
    def test_noiseless_copy(self):
        rng = np.random.default_rng(0)
        x1 = rng.integers(0, 2, 200)
        x2 = rng.integers(0, 2, 200)
        s, y = simulate_channel(two_state(), copy_pair_channel(2), x1, x2, seed=4)
        assert np.array_equal(y, 2 * x1 + x2)
        assert set(np.unique(s)) <= {0, 1}

    def test_state_pair_frequencies(self):
        chain = two_state(0.2, 0.2)
        n = 100_000
        s, _ = simulate_channel(
            chain, uniform_noise_channel(2), np.zeros(n, dtype=int), np.zeros(n, dtype=int), seed=8
        )
        pairs = np.zeros((2, 2))
        np.add.at(pairs, (s[:-1], s[1:]), 1.0)
        pairs /= n - 1
        target = chain.pi[:, None] * chain.K
        for a in range(2):
            for b in range(2):
                p = target[a, b]
                assert abs(pairs[a, b] - p) <= 3 * np.sqrt(p * (1 - p) / (n - 1))

    def test_fully_noisy_channel_no_information(self):
        rng = np.random.default_rng(1)
        x1 = rng.integers(0, 2, 50_000)
        _, y = simulate_channel(
            single_state(), uniform_noise_channel(1), x1, np.zeros_like(x1), seed=2
        )
        # plug-in mutual information estimate, bits
        joint = np.zeros((2, 2))
        np.add.at(joint, (x1, y), 1.0)
        joint /= joint.sum()
        px = joint.sum(1, keepdims=True)
        py = joint.sum(0, keepdims=True)
        nz = joint > 0
        mi = (joint[nz] * np.log2(joint[nz] / (px @ py)[nz])).sum()
        assert mi < 5e-4

    def test_seed_determinism(self):
        x1 = np.zeros(64, dtype=int)
        a = simulate_channel(two_state(), uniform_noise_channel(2), x1, x1, seed=11)
        b = simulate_channel(two_state(), uniform_noise_channel(2), x1, x1, seed=11)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


class TestDecodeJointTypicality:
    def _pipeline(self, chain, channel, policy, rates, n, d1, d2, seed, sent):
        rng = np.random.default_rng(seed)
        books = generate_codebooks(policy, n, rates, seed=rng)
        from fsmac.markov import sample_state_path
        from fsmac.coding import _sample_outputs

        s = sample_state_path(chain, n, rng)
        sd1, sd2 = delayed_sequences(s, d1, d2)
        x1, x2 = encode(books, *sent, sd1, sd2, d1, d2)
        y = _sample_outputs(channel, x1, x2, s, rng)
        joint = assemble_joint(delayed_state_joint(chain, d1, d2), policy, channel)
        return books, s, y, joint

    def test_noiseless_decodes_sent_triplet(self):
        chain, channel = two_state(), copy_pair_channel(2)
        policy = uniform_policy(2)
        sent = (0, 2, 1)
        books, s, y, joint = self._pipeline(
            chain, channel, policy, (0.0, 0.0625, 0.0625), 128, 2, 1, 5, sent
        )
        res = decode_joint_typicality(books, y, s, 2, 1, 0.15, joint)
        assert res.ok and res.triplet == sent

    def test_single_candidate_clean_channel(self):
        chain, channel = single_state(), copy_pair_channel(1)
        policy = uniform_policy(1)
        books, s, y, joint = self._pipeline(
            chain, channel, policy, (0.0, 0.0, 0.0), 128, 0, 0, 6, (0, 0, 0)
        )
        res = decode_joint_typicality(books, y, s, 0, 0, 0.2, joint)
        assert res.ok and res.triplet == (0, 0, 0)

    def test_exhaustive_oracle_agreement(self):
        # brute-force recomputation of the typicality test for all triplets
        chain, channel = two_state(), xor_bsc_channel(2, (0.1, 0.4))
        policy = uniform_policy(2, nu=2)
        n, d1, d2, eps = 8, 1, 0, 0.21
        books, s, y, joint = self._pipeline(
            chain, channel, policy, (0.125, 0.125, 0.125), n, d1, d2, 9, (1, 0, 1)
        )
        res = decode_joint_typicality(books, y, s, d1, d2, eps, joint)
        M0, M1, M2 = books.sizes
        typical = []
        m_eff = n - d1
        for m0 in range(M0):
            for m1 in range(M1):
                for m2 in range(M2):
                    u, x1, x2 = candidate_sequences(books, m0, m1, m2, s, d1, d2)
                    emp = {}
                    for idx, i in enumerate(range(d1, n)):
                        key = (u[idx], x1[idx], x2[idx], s[i], s[i - d1], s[i - d2], y[i])
                        emp[key] = emp.get(key, 0) + 1.0 / m_eff
                    ok = True
                    it = np.nditer(joint.table, flags=["multi_index"])
                    for val in it:
                        p = float(val)
                        e = emp.get(it.multi_index, 0.0)
                        if p > 0 and abs(e - p) > eps:
                            ok = False
                            break
                        if p == 0 and e > 0:
                            ok = False
                            break
                    if ok:
                        typical.append((m0, m1, m2))
        if len(typical) == 1:
            assert res.ok and res.triplet == typical[0]
        else:
            assert not res.ok and res.n_typical == len(typical)

    def test_reconstruction_matches_transmission(self):
        chain, channel = two_state(), xor_bsc_channel(2, (0.05, 0.3))
        policy = uniform_policy(2, nu=2)
        n, d1, d2 = 32, 3, 1
        rng = np.random.default_rng(12)
        books = generate_codebooks(policy, n, (0.0, 0.125, 0.125), seed=rng)
        from fsmac.markov import sample_state_path

        s = sample_state_path(chain, n, rng)
        sd1, sd2 = delayed_sequences(s, d1, d2)
        sent = (0, 3, 2)
        x1, x2 = encode(books, *sent, sd1, sd2, d1, d2)
        _, rx1, rx2 = candidate_sequences(books, *sent, s, d1, d2)
        assert np.array_equal(rx1, x1[d1:])
        assert np.array_equal(rx2, x2[d1:])

    def test_epsilon_validated(self):
        books = generate_codebooks(uniform_policy(1), 8, (0.0, 0.0, 0.0), seed=0)
        joint = assemble_joint(
            delayed_state_joint(single_state(), 0, 0), uniform_policy(1), copy_pair_channel(1)
        )
        z = np.zeros(8, dtype=int)
        with pytest.raises(ValueError, match="epsilon"):
            decode_joint_typicality(books, z, z, 0, 0, 0.0, joint)

    def test_triplet_cap_enforced(self):
        books = generate_codebooks(uniform_policy(1), 8, (0.0, 1.1, 1.1), seed=0)
        joint = assemble_joint(
            delayed_state_joint(single_state(), 0, 0), uniform_policy(1), copy_pair_channel(1)
        )
        z = np.zeros(8, dtype=int)
        with pytest.raises(ValueError, match="cap"):
            decode_joint_typicality(books, z, z, 0, 0, 0.05, joint)


class TestEstimateErrorRate:
    def test_zero_rates_noiseless(self):
        est = estimate_error_rate(
            two_state(), copy_pair_channel(2), uniform_policy(2),
            (0.0, 0.0, 0.0), 128, 0.15, 30, seed=0, d1=1, d2=0,
        )
        assert est.p_e == 0.0
        assert est.ci_low == 0.0

    def test_fully_noisy_positive_rate(self):
        est = estimate_error_rate(
            single_state(), uniform_noise_channel(1), uniform_policy(1),
            (0.0, 2 / 32, 2 / 32), 32, 0.05, 50, seed=1,
        )
        assert est.p_e >= 0.9

    def test_seed_determinism(self):
        args = (
            two_state(), xor_bsc_channel(2, (0.1, 0.45)), uniform_policy(2),
            (0.0, 1 / 64, 1 / 64), 64, 0.05, 30,
        )
        a = estimate_error_rate(*args, seed=3, d1=2, d2=2)
        b = estimate_error_rate(*args, seed=3, d1=2, d2=2)
        assert a == b

    def test_wilson_interval_brackets(self):
        est = estimate_error_rate(
            single_state(), uniform_noise_channel(1), uniform_policy(1),
            (0.0, 1 / 16, 0.0), 16, 0.08, 60, seed=5,
        )
        assert 0.0 <= est.ci_low <= est.p_e <= est.ci_high <= 1.0


class TestSplitMessages:
    def test_full_sharing(self):
        conf = ConferencingConfig(1.0, 1.0)
        sm = split_messages(5, 3, (0.5, 0.25), conf, 8)  # counts 16 and 4
        assert sm.m1_prime == 0 and sm.m2_prime == 0
        assert sm.m0_prime == (5, 3)
        assert (sm.n_cells1, sm.n_cells2) == (16, 4)

    def test_zero_links_identity(self):
        conf = ConferencingConfig(0.0, 0.0)
        sm = split_messages(5, 3, (0.5, 0.25), conf, 8)
        assert sm.m0_prime == (0, 0)
        assert (sm.m1_prime, sm.m2_prime) == (5, 3)

    def test_cells_and_roundtrip_256(self):
        conf = ConferencingConfig(1.0, 0.0)
        for m1 in range(256):
            sm = split_messages(m1, 0, (2.0, 0.0), conf, 4)
            assert sm.n_cells1 == 16 and sm.idx_size1 == 16
            assert merge_messages(sm) == (m1, 0)

    def test_exhaustive_bijection_small_blocks(self):
        for n in range(1, 7):
            for r1, r2 in [(0.5, 0.3), (1.0, 0.0), (0.7, 0.7), (0.9, 0.2)]:
                for c12, c21 in [(0.0, 0.0), (0.3, 0.6), (2.0, 2.0), (0.5, 0.0)]:
                    conf = ConferencingConfig(c12, c21)
                    M1 = message_count(n, r1)
                    M2 = message_count(n, r2)
                    seen = set()
                    for m1 in range(M1):
                        for m2 in range(M2):
                            sm = split_messages(m1, m2, (r1, r2), conf, n)
                            key = (sm.m0_prime, sm.m1_prime, sm.m2_prime)
                            assert key not in seen
                            seen.add(key)
                            assert merge_messages(sm) == (m1, m2)
                    assert len(seen) == M1 * M2

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError, match="m1"):
            split_messages(16, 0, (0.5, 0.0), ConferencingConfig(), 8)


class TestConferencingErrorRate:
    def test_zero_links_match_private_pipeline(self):
        chain, channel = two_state(), xor_bsc_channel(2, (0.1, 0.45))
        policy = uniform_policy(2)
        kwargs = dict(n=64, epsilon=0.05, trials=40, seed=7, d1=2, d2=1)
        direct = estimate_error_rate(
            chain, channel, policy, (0.0, 2 / 64, 2 / 64), **kwargs
        )
        viaconf = conferencing_error_rate(
            chain, channel, policy, (2 / 64, 2 / 64), ConferencingConfig(0.0, 0.0), **kwargs
        )
        assert direct == viaconf

    def test_full_sharing_decodes_cells(self):
        # generous links turn both messages into the common part; the inputs
        # must follow the auxiliary symbol for that part to be decodable
        chain, channel = single_state(), copy_pair_channel(1)
        pU = np.array([[0.5, 0.5]])
        pX1 = np.zeros((2, 1, 2))
        pX1[0, 0, 0] = pX1[1, 0, 1] = 1.0  # x1 = u
        pX2 = np.zeros((2, 1, 1, 2))
        pX2[0, 0, 0, 0] = pX2[1, 0, 0, 1] = 1.0  # x2 = u
        policy = InputPolicy(pU, pX1, pX2)
        est = conferencing_error_rate(
            chain, channel, policy, (2 / 128, 2 / 128),
            ConferencingConfig(1.0, 1.0), n=128, epsilon=0.2, trials=20, seed=9,
        )
        assert est.p_e == 0.0

    def test_seed_determinism(self):
        chain, channel = two_state(), xor_bsc_channel(2, (0.2, 0.4))
        args = (chain, channel, uniform_policy(2), (1 / 64, 1 / 64), ConferencingConfig(0.5, 0.0))
        a = conferencing_error_rate(*args, n=64, epsilon=0.06, trials=25, seed=13, d1=1, d2=1)
        b = conferencing_error_rate(*args, n=64, epsilon=0.06, trials=25, seed=13, d1=1, d2=1)
        assert a == b

    def test_error_decay_inside_region_with_active_split(self):
        # quaternary inputs carry (shared bit, private bit); the good state
        # reveals (shared, private1, private2) and the bad state is noise.
        # Small links make the split genuinely active (several cells per
        # message) and the decay direction must persist.
        from fsmac import assemble_joint, best_weighted_point, conferencing_bounds

        pi_good, rho = 0.052, 0.1
        rows = np.array([pi_good, 1 - pi_good])
        chain = MarkovChain(["G", "B"], rho * np.eye(2) + (1 - rho) * rows[None, :])
        ny = 8
        table = np.zeros((4, 4, 2, ny))
        for x1 in range(4):
            for x2 in range(4):
                u_bit, b1 = divmod(x1, 2)
                _, b2 = divmod(x2, 2)
                table[x1, x2, 0, (u_bit * 2 + b1) * 2 + b2] = 1.0
                table[x1, x2, 1, :] = 1.0 / ny
        channel = DmcChannel(table)
        pU = np.full((2, 2), 0.5)
        pX1 = np.zeros((2, 2, 4))
        pX2 = np.zeros((2, 2, 2, 4))
        for u in range(2):
            pX1[u, :, 2 * u] = pX1[u, :, 2 * u + 1] = 0.5
            pX2[u, :, :, 2 * u] = pX2[u, :, :, 2 * u + 1] = 0.5
        policy = InputPolicy(pU, pX1, pX2)
        conf = ConferencingConfig(0.01, 0.01)
        bounds = conferencing_bounds(
            assemble_joint(delayed_state_joint(chain, 1, 1), policy, channel), conf
        )
        r = 0.8 * best_weighted_point(bounds, 1.0, 1.0)[0] / 2
        probe = split_messages(0, 0, (r, r), conf, 128)
        assert probe.n_cells1 > 1 and probe.idx_size1 > 1  # split is nontrivial
        pes = []
        for n in (64, 128):
            est = conferencing_error_rate(
                chain, channel, policy, (r, r), conf, n, epsilon=0.05,
                trials=200, seed=17, d1=1, d2=1,
            )
            pes.append(est.p_e)
        assert pes[0] > pes[1]
