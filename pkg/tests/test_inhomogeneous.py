import dataclasses
import random
from fractions import Fraction

import pytest

from cqtcheck import cqt, lorentz
from cqtcheck import inhomogeneous as inh
from cqtcheck.errors import AbstractLambdaMode, AxiomViolation, StructureViolation
from cqtcheck.scalars import (ConjMode, G_I, G_ONE, Gaussian, ONE, Q, Scalar,
                              ZERO)
from cqtcheck.tensor import Tensor, flip, kron, pad_with_identity

i_s = Scalar((G_I,), (G_ONE,))


@pytest.fixture(scope="module")
def classical():
    base = lorentz.make_sl2(Q.subs(1), 1)
    ld = lorentz.make_lorentz(base, flip(2, 2), ONE)
    return inh.poincare_from_lorentz(ld)


def twisted_R():
    d = Tensor.from_rows([[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    return (flip(4, 4) @ kron(d, d.inverse())).with_legs((4, 4), (4, 4))


def test_pauli_intertwiner():
    v = inh.pauli_V()
    col0 = [v.entry((c, d), (0,)) for c in range(2) for d in range(2)]
    assert col0 == [ONE, ZERO, ZERO, ONE]
    vinv = v.inverse()
    assert vinv @ v == Tensor.identity((4,))
    half = Scalar.normalize((G_ONE,), (Gaussian(2),))
    assert vinv == v.conjugate(ConjMode.REAL).transpose() * half


def test_classical_vector_exchange_is_swap(classical):
    assert classical.R == flip(4, 4)
    assert classical.R @ classical.R == Tensor.identity((4, 4))
    assert classical.Z.is_zero()
    assert classical.T.is_zero()


def test_build_G_unital_and_multiplicative(classical):
    assert inh.build_G(classical, ()) == \
        Tensor.identity((4,)).with_legs((4, 1), (1, 4))
    g_w = inh.build_G(classical, ("w",))
    assert g_w == classical.rep("w").G
    g_wwb = inh.build_G(classical, ("w", "wb"))
    # conjugating the two-letter word by the Pauli intertwiner gives R
    V = classical.V
    conj = (pad_with_identity(V.inverse(), (4,), ())
            @ g_wwb @ pad_with_identity(V, (), (4,)))
    assert conj == classical.R


def test_build_H_zero_for_classical(classical):
    assert inh.build_H(classical, ("w", "wb")).is_zero()
    assert inh.build_H(classical, ()).is_zero()
    assert inh.build_H(classical, ("w",)) == classical.rep("w").H


def test_invariant_column(classical):
    m0 = inh.build_m0(classical)
    half = Scalar.normalize((G_ONE,), (Gaussian(2),))
    expect = [ZERO] * 16
    expect[0] = -half
    expect[5] = half
    expect[10] = half
    expect[15] = half
    assert m0.entries == expect
    assert classical.R @ m0 == m0
    assert inh.check_m_star(classical, m0, "x").status == "pass"
    for name in ("w", "wb"):
        assert inh.counit_invariance_defect(classical, name, m0).is_zero()


def test_abstract_mode_has_no_distinguished_invariant():
    da = inh.abstract_datum(flip(4, 4))
    with pytest.raises(AbstractLambdaMode):
        inh.build_m0(da)


def test_extended_exchange_blocks(classical):
    rp = inh.build_RP(classical)
    assert rp == flip(5, 5)
    assert rp @ rp == Tensor.identity((5, 5))
    # the one-way sectors read the identity blocks
    for a in range(4):
        assert rp.entry((a, 4), (4, a)) == ONE
        assert rp.entry((4, a), (a, 4)) == ONE
    assert rp.entry((4, 4), (4, 4)) == ONE


def test_extended_block_shift_sector():
    # with RT = -T the shift corner is (R-1)T = -2T
    R = twisted_R()
    ent = [ZERO] * 16
    ent[1 * 4 + 2] = i_s
    ent[2 * 4 + 1] = -i_s
    T = Tensor((4, 4), (), ent)
    assert (R @ T) == -T
    d = inh.abstract_datum(R, T=T)
    rp = inh.build_RP(d)
    for a in range(4):
        for b in range(4):
            assert rp.entry((a, b), (4, 4)) == T.entry((a, b), ()) * (-2)


def test_rp_squares_to_identity_under_conditions():
    R = twisted_R()
    ent = [ZERO] * 16
    ent[1 * 4 + 2] = i_s
    ent[2 * 4 + 1] = -i_s
    T = Tensor((4, 4), (), ent)
    d = inh.abstract_datum(R, T=T)
    rp = inh.build_RP(d)
    assert rp @ rp == Tensor.identity((5, 5))


def test_shift_hermiticity_enforced():
    ent = [ZERO] * 16
    ent[1] = ONE  # T_01 = 1 with T_10 = 0 is not hermitian
    T = Tensor((4, 4), (), ent)
    with pytest.raises(AxiomViolation):
        inh.abstract_datum(flip(4, 4), T=T)


def test_twist_vanishes_for_classical(classical):
    assert inh.compute_F_tilde(classical).is_zero()
    for name in classical.reps:
        assert inh.tau_on_rep(classical, name).is_zero()


def test_twist_formula_against_direct_expansion():
    # independent oracle: expand the twist on the vector rep entrywise from
    # its defining convolution data, then compare with compute_F_tilde
    R = twisted_R()
    rng = random.Random(6)
    zent = [Scalar.from_int(rng.randrange(-1, 2)) for _ in range(64)]
    Z = Tensor((4, 4), (4,), zent)
    sym = [[rng.randrange(-1, 2) for _ in range(4)] for _ in range(4)]
    tent = [Scalar.from_int(sym[a][b] + sym[b][a]) for a in range(4)
            for b in range(4)]
    T = Tensor((4, 4), (), tent)
    d = inh.abstract_datum(R, Z=Z, T=T)
    got = inh.compute_F_tilde(d)
    N = 4
    for idx in [(0, 1, 2, 3), (1, 1, 0, 0), (3, 2, 1, 0), (0, 0, 0, 0)]:
        i, j, k, m2 = idx
        acc = ZERO
        for m in range(N):
            for n in range(N):
                r = (R - Tensor.identity((4, 4))).entry((i, j), (m, n))
                if not r.num:
                    continue
                term = ZERO
                for a in range(N):
                    term = term + Z.entry((n, k), (a,)) * Z.entry((m, a), (m2,))
                for s in range(N):
                    term = term - Z.entry((m, n), (s,)) * Z.entry((s, k), (m2,))
                if k == m2:
                    term = term + T.entry((m, n), ())
                for c in range(N):
                    for b in range(N):
                        for a in range(N):
                            term = term - (R.entry((n, k), (c, b))
                                           * R.entry((m, c), (m2, a))
                                           * T.entry((a, b), ()))
                acc = acc + r * term
        assert got.entry((i, j, k), (m2,)) == acc


def test_structure_reports_classical(classical):
    reports = inh.check_structure(classical)
    assert cqt.all_pass(reports)
    skipped = [r for r in reports if r.status == "skipped"]
    assert all("twist-on-rep" in r.check_id for r in skipped)


def test_structure_shift_skew_fails_for_fixed_T(classical):
    bad = dataclasses.replace(classical, T=classical.m0)
    reports = inh.check_structure(bad)
    failed = {r.check_id for r in reports if r.status == "fail"}
    assert "structure:shift-skew" in failed


def test_antisymmetrized_shift_obstruction():
    # minimal datum with a nonzero totally antisymmetrized shift component
    zent = [ZERO] * 64
    zent[(0 * 4 + 1) * 4 + 2] = ONE
    Z = Tensor((4, 4), (4,), zent)
    tent = [ZERO] * 16
    tent[2 * 4 + 3] = i_s
    tent[3 * 4 + 2] = -i_s
    T = Tensor((4, 4), (), tent)
    d = inh.abstract_datum(flip(4, 4), Z=Z, T=T)
    a3 = inh.antisymmetrizer3(d)
    zt = (pad_with_identity(Z, (), (4,)) - pad_with_identity(Z, (4,), ())) @ T
    assert not (a3 @ zt).is_zero()
    reports = inh.check_structure(d)
    failed = {r.check_id for r in reports if r.status == "fail"}
    assert "structure:antisym-shift" in failed
    with pytest.raises(StructureViolation):
        inh.classify_poincare(d)


def test_braid_and_hexagons_classical(classical):
    for k in (1, -1):
        cand = inh.poincare_candidate(classical, k)
        reports = inh.check_braid_hexagons(classical, cand)
        assert cqt.all_pass(reports)


def test_braid_fixed_coefficient(classical):
    cand = inh.poincare_candidate(classical, 1, c=Scalar.from_int(7))
    reports = inh.check_braid_hexagons(classical, cand)
    assert cqt.all_pass(reports)


def test_braid_interpolation_agrees_with_samples(classical):
    # degree-3 interpolation must agree with direct evaluation at many
    # rational coefficients
    rng = random.Random(13)
    m0 = classical.m0
    for _ in range(10):
        c = Scalar.from_fraction(
            Fraction(rng.randrange(-20, 21), rng.randrange(1, 9)))
        rq = inh.build_RQ(classical, m0, c)
        assert inh.braid_defect(rq).is_zero()


def test_braid_expansion_identity(classical):
    rp = inh.build_RP(classical)
    mp = inh.build_mP(classical, classical.m0)
    ident = Tensor.identity((5, 5))
    assert (mp @ mp).is_zero()
    for cval in (0, 1, 3, 7):
        c = Scalar.from_int(cval)
        rq = rp + mp * c
        lhs = rq @ rq - ident
        rhs = (rp @ mp + mp @ rp) * c + (mp @ mp) * (c * c)
        assert lhs == rhs
    assert (rp @ rp - ident).is_zero()


def test_twisted_shift_breaks_braid_and_hexagon():
    # a shift with nonvanishing twist obstruction breaks both the braid and
    # the one-sided hexagon on the translation sector
    R = twisted_R()
    ent = [ZERO] * 16
    ent[1 * 4 + 2] = i_s
    ent[2 * 4 + 1] = -i_s
    T = Tensor((4, 4), (), ent)
    d = inh.abstract_datum(R, T=T)
    assert not inh.compute_F_tilde(d).is_zero()
    reports = inh.check_braid_hexagons(d, None)
    failed = {r.check_id for r in reports if r.status == "fail"}
    assert "braid:extended" in failed
    assert "hexagon-one:Lam" in failed


def test_hexagon_failure_localizes_in_translation_sector():
    # when the homogeneous level is coherent, the pure vector sector of the
    # one-sided hexagon holds even while the twist obstruction breaks the
    # translation-translation sector
    from cqtcheck.tensor import unflatten
    R = twisted_R()
    ent = [ZERO] * 16
    ent[1 * 4 + 2] = i_s
    ent[2 * 4 + 1] = -i_s
    T = Tensor((4, 4), (), ent)
    d = inh.abstract_datum(R, T=T)
    P, N = 5, 4
    nv = inh.build_N(d, "Lam")
    rq = inh.build_RQ(d, None).with_legs((P, P), (P, P))
    lhs = (pad_with_identity(nv, (P,), ()) @ pad_with_identity(nv, (), (P,))
           @ pad_with_identity(rq, (N,), ()))
    rhs = (pad_with_identity(rq, (), (N,)) @ pad_with_identity(nv, (P,), ())
           @ pad_with_identity(nv, (), (P,)))
    defect = lhs - rhs
    assert not defect.is_zero()
    sectors = set()
    for k, v in enumerate(defect.entries):
        if v.num:
            _, c = divmod(k, defect.ncols)
            cm = unflatten(defect.dom, c)
            sectors.add((cm[1] == N, cm[2] == N))
    assert sectors == {(True, True)}


def test_vector_normalization(classical):
    for k in (1, -1):
        cand = inh.poincare_candidate(classical, k)
        assert cqt.all_pass(inh.check_R_v_Lambda(classical, cand))
    mixed = inh.PoincareCandidate(
        lorentz.candidate_blocks(classical.lorentz, 1, 1, -1, 1), 0)
    reports = inh.check_R_v_Lambda(classical, mixed)
    assert any(r.status == "fail" for r in reports)


def test_classify_poincare_classical(classical):
    cls = inh.classify_poincare(classical)
    summary = cls.summary()
    assert summary["structures_per_coefficient"] == 2
    assert summary["valid_signs"] == [-1, 1]
    assert summary["normalization_survivors"] == 2
    assert summary["star_classification_verified"]
    assert summary["ct_at_zero_only"]
    assert cqt.all_pass(cls.reports())


def test_classify_poincare_star_samples(classical):
    cls = inh.classify_poincare(classical, star_samples=(2, 5, (1, 1), (0, 3)))
    for label, rep in cls.star_samples.items():
        assert rep.status == "pass", label


def test_classify_abstract_flip_free_invariant():
    rng = random.Random(1)
    sym = [[rng.randrange(-2, 3) for _ in range(4)] for _ in range(4)]
    m = Tensor((4, 4), (),
               [Scalar.from_int(sym[a][b] + sym[b][a]) for a in range(4)
                for b in range(4)])
    d = inh.abstract_datum(flip(4, 4), invariants=[m])
    cls = inh.classify_poincare(d)
    assert cqt.all_pass(cls.reports())


def test_hexagon_identity_blocks(classical):
    # the composite exchange matrix of the spinor reps reproduces N of the
    # vector rep after conjugation
    V = classical.V
    P = 5
    n_w = inh.build_N(classical, "w")
    n_wb = inh.build_N(classical, "wb")
    composite = (pad_with_identity(n_w, (), (2,))
                 @ pad_with_identity(n_wb, (2,), ()))
    conj = (pad_with_identity(V.inverse(), (P,), ())
            @ composite @ pad_with_identity(V, (), (P,)))
    assert conj == inh.build_N(classical, "Lam")
