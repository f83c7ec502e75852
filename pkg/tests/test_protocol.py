import numpy as np
import pytest

from qpurify import (InvalidForm, PHI_PLUS, ProductState, PSI_MINUS,
                     WCanonicalForm, apply_protocol, build_protocol, ket,
                     kron, optimal_probability, procrustean_step, projector,
                     pure_density, purify_pair, random_w_form, reconstruct,
                     schmidt_decompose, validate_density, w_canonicalize)

I2 = np.eye(2, dtype=complex)


def form(p=0.5, alpha=0.6, beta=0.7, gamma=None, u_a=I2, u_b=I2):
    if gamma is None:
        gamma = np.sqrt(max(0.0, 1.0 - alpha ** 2 - beta ** 2))
    return WCanonicalForm(u_a=u_a, u_b=u_b, p=p, alpha=alpha, beta=beta,
                         gamma=float(gamma))


def test_symmetric_pair_probability():
    # Equal states with alpha = beta = 1/sqrt(2), p = 1/2: the optimum is
    # 2 * (1/2)^2 * (1/4) = 1/8.
    f = form(p=0.5, alpha=np.sqrt(0.5), beta=np.sqrt(0.5), gamma=0.0)
    state = reconstruct(f)
    report = purify_pair(state, state)
    assert report.purifiable
    assert report.probability == pytest.approx(0.125, abs=1e-12)
    assert report.schmidt_margin < 1e-12


def test_probability_formula_asymmetric():
    fa = form(p=0.3, alpha=0.5, beta=0.7)
    fb = form(p=0.8, alpha=0.8, beta=0.4)
    expected = 2 * 0.3 * 0.8 * min((0.5 * 0.4) ** 2, (0.8 * 0.7) ** 2)
    report = purify_pair(reconstruct(fa), reconstruct(fb))
    assert report.probability == pytest.approx(expected, abs=1e-12)
    assert optimal_probability(fa, fb) == pytest.approx(expected, abs=1e-15)


def test_filters_have_operator_norm_at_most_one():
    rng = np.random.default_rng(3)
    for _ in range(10):
        ops = build_protocol(random_w_form(rng), random_w_form(rng))
        for filt in (ops.m_aa, ops.n_bb):
            assert np.linalg.svd(filt, compute_uv=False)[0] <= 1.0 + 1e-12


def test_output_is_maximally_entangled_across_parties():
    rng = np.random.default_rng(8)
    fa, fb = random_w_form(rng), random_w_form(rng)
    report = purify_pair(reconstruct(fa), reconstruct(fb))
    # output_state is ordered (A, A', B, B'): party split is 4 x 4.
    coeffs, _, _ = schmidt_decompose(report.output_state, (4, 4))
    np.testing.assert_allclose(coeffs[:2], np.sqrt(0.5), atol=1e-9)
    np.testing.assert_allclose(coeffs[2:], 0.0, atol=1e-9)


def test_min_tie_flag():
    f = form(p=0.5, alpha=np.sqrt(0.5), beta=np.sqrt(0.5), gamma=0.0)
    assert build_protocol(f, f).min_tie
    assert not build_protocol(form(alpha=0.5, beta=0.7),
                              form(alpha=0.7, beta=0.5)).min_tie


def test_apply_protocol_rejects_mismatched_input():
    fa = form(p=0.3, alpha=0.5, beta=0.7)
    ops = build_protocol(fa, fa)
    other = reconstruct(form(p=0.9, alpha=0.5, beta=0.7))
    with pytest.raises(InvalidForm):
        apply_protocol(other, other, ops)


def test_purify_pair_refuses_non_w_states():
    two_rays = validate_density(0.5 * pure_density(PHI_PLUS).matrix
                                + 0.5 * projector(ket("00")))
    report = purify_pair(two_rays, two_rays)
    assert not report.purifiable
    assert report.probability == 0.0
    assert "single product ray" in report.reason

    mixed_w = reconstruct(form())
    report = purify_pair(mixed_w, validate_density(np.eye(4) / 4.0))
    assert not report.purifiable
    assert "sigma" in report.reason


def test_purify_pair_points_pure_entangled_to_procrustean():
    report = purify_pair(pure_density(PSI_MINUS), pure_density(PSI_MINUS))
    assert not report.purifiable
    assert "procrustean" in report.reason


def test_probability_invariant_under_local_unitaries():
    from qpurify import haar_unitary
    rng = np.random.default_rng(12)
    fa = random_w_form(rng, with_unitaries=False)
    fb = random_w_form(rng, with_unitaries=True)
    plain = purify_pair(reconstruct(fa), reconstruct(fb)).probability
    rotated_a = WCanonicalForm(u_a=haar_unitary(2, rng),
                               u_b=haar_unitary(2, rng),
                               p=fa.p, alpha=fa.alpha, beta=fa.beta,
                               gamma=fa.gamma)
    rotated = purify_pair(reconstruct(rotated_a), reconstruct(fb)).probability
    assert rotated == pytest.approx(plain, abs=1e-10)


def test_procrustean_step():
    vec = 0.8 * ket("00") + 0.6 * ket("11")
    filt, prob = procrustean_step(vec, (2, 2))
    assert prob == pytest.approx(2 * 0.6 ** 2, abs=1e-12)
    out = kron(filt, np.eye(2)) @ vec
    assert np.vdot(out, out).real == pytest.approx(prob, abs=1e-12)
    coeffs, _, _ = schmidt_decompose(out / np.linalg.norm(out), (2, 2))
    np.testing.assert_allclose(coeffs, np.sqrt(0.5), atol=1e-12)


def test_procrustean_step_rejects_product_state():
    with pytest.raises(ProductState):
        procrustean_step(ket("01"), (2, 2))


def test_pipeline_from_rotated_states():
    # End to end: rotated W states in, canonical frames found, filters
    # applied, output certified.
    rng = np.random.default_rng(23)
    for _ in range(5):
        ra = reconstruct(random_w_form(rng))
        rb = reconstruct(random_w_form(rng))
        report = purify_pair(ra, rb)
        assert report.purifiable
        expected = optimal_probability(w_canonicalize(ra), w_canonicalize(rb))
        assert report.probability == pytest.approx(expected, abs=1e-9)
