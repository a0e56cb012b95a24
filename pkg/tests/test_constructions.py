import itertools
from fractions import Fraction

import pytest

from orbitlab.actions import BernoulliShift, IntShift
from orbitlab.cocycles import Cocycle, CocycleTarget, verify_identity, verify_inverse_pair
from orbitlab.constructions import (CylinderAction, FactorSetting,
                                    StarAction, build_cylinder_oe,
                                    component_twist_system, coset_freshness_report,
                                    cylinder_measure_report, degenerate_stable_oe,
                                    dependency_radius_report, edge_increments,
                                    extension_action_report,
                                    extension_distinctness_report,
                                    extension_independence_report,
                                    factor_quotient_reconstructor, factor_restriction,
                                    free_action_on_cosets, increment_equivariance_report,
                                    increment_grouped_reports,
                                    increment_roundtrip_report, integrate_increments,
                                    match_determinacy_report, match_measure_report,
                                    orbit_section, parenthesis_match, quotient_rho,
                                    restriction_consequence_report,
                                    restriction_equivariance_report, restriction_family,
                                    section_report, star_conjugation_report,
                                    star_injectivity_report, star_orbit_report,
                                    star_relation_report)
from orbitlab.groups import cyclic, direct_power, s3
from orbitlab.spaces import (ExplicitConfiguration, SeededConfiguration, Space,
                             agree_on, derive_seed, sample, sample_stream)
from orbitlab.verify import UndeterminedError
from orbitlab.actions import check_coinduced_characterization
from orbitlab.words import ball, coset, free_group

Z2 = cyclic(2)
F2 = free_group("a", "b")


# -- increments -----------------------------------------------------------------


def test_increments_constant_configuration():
    shift = BernoulliShift(F2, Z2)
    x = ExplicitConfiguration(shift.space, {g: 1 for g in ball(F2, 2)})
    v = edge_increments(x)
    power = v.space.alphabet
    for g in ball(F2, 1):
        assert power.component_tuples[v.value(g)] == (0, 0)


def test_increments_diagonal_invariance():
    from orbitlab.spaces import diagonal_translate
    shift = BernoulliShift(F2, s3())
    x = sample(shift.space, 4)
    v = edge_increments(x)
    for k in range(6):
        vk = edge_increments(diagonal_translate(x, k))
        assert agree_on(vk, v, ball(F2, 2))


def test_increment_equivariance_report():
    assert increment_equivariance_report(F2, Z2, 2, 10, seed=5).verdict == "pass"


def test_increment_roundtrip_reports():
    assert increment_roundtrip_report(F2, Z2, 3, 10, seed=6).verdict == "pass"
    assert increment_roundtrip_report(F2, s3(), 2, 5, seed=7).verdict == "pass"


def test_integrate_trivial_increments():
    power = direct_power(Z2, 2)
    vspace = Space(BernoulliShift(F2, power).space.index, power)
    v = ExplicitConfiguration(vspace, {g: power.identity for g in ball(F2, 2)})
    x = integrate_increments(v, 2)
    assert all(x.value(g) == Z2.identity for g in ball(F2, 2))


def test_increment_grouped_exact_checks_s3():
    reports = increment_grouped_reports(F2, s3(), 1, budget=6 ** 5)
    assert reports
    assert all(r.verdict == "pass" for r in reports)
    # every enumeration stayed within the allowed per-check window
    assert all(r.statistics["states"] <= 6 ** 5 for r in reports)


# -- free-factor restriction ------------------------------------------------------


def setting22():
    return FactorSetting(cyclic(2, "g"), cyclic(2, "h"), Z2)


def test_factor_restriction_constant():
    st = setting22()
    x = ExplicitConfiguration(
        st.shift.space,
        {coset(st.spec, st.gamma, w): 1 for w in
         ball(st.spec, 2, parts="g2", mode="syllables")})
    values, increments = factor_restriction(x, st.gamma, st.lam_group, st.lam)
    assert all(v == 1 for v in values.values())
    assert all(i == Z2.identity for i in increments.values())


def test_restriction_consequence_and_equivariance():
    st = setting22()
    assert restriction_consequence_report(st, 2, 20, seed=8).verdict == "pass"
    assert restriction_equivariance_report(st, 20, seed=9).verdict == "pass"


def test_restriction_family_independent_radius1():
    from orbitlab.verify import independence_exact
    st = setting22()
    family = restriction_family(st, 1)
    report = independence_exact(st.shift.space, family, require_uniform=True)
    assert report.verdict == "pass"


def test_factor_quotient_characterization():
    st = setting22()
    rho = quotient_rho(st)
    _, _, act, _ = __import__("orbitlab.constructions", fromlist=["quotient_code"]) \
        .quotient_code(st)

    def variable_coords(t):
        return tuple(coset(st.spec, st.gamma, w * t)
                     for w in st.lam_words(include_identity=True))

    reconstructor = factor_quotient_reconstructor(st, 2)
    report = check_coinduced_characterization(
        st.quotient, rho, act, st.lam, 2,
        transversal_kwargs={"parts": "g2", "mode": "syllables"},
        variable_coords=variable_coords, reconstructor=reconstructor,
        canonicalize=st.quotient.normalize, samples=10, seed=10)
    assert report.verdict == "pass"


# -- star actions ----------------------------------------------------------------


def z2_system(twist_nontrivial=True):
    lam, K = cyclic(2, "p"), cyclic(2, "k")
    ident_aut = (0, 1)
    trivial = [0, 0]
    twisted = [0, 1] if twist_nontrivial else trivial
    return component_twist_system(lam, K, [(ident_aut, trivial), (ident_aut, twisted)])


def test_component_twist_system_valid():
    sys_ = z2_system()
    eta, eta_prime = sys_.solve_transport()
    assert len(eta) == 2 * sys_.alphabet.size


def test_star_reports_z2():
    star = StarAction(cyclic(2, "c"), z2_system())
    assert star_relation_report(star, 4, 5, seed=11).verdict == "pass"
    assert star_orbit_report(star, 2, 5, seed=12).verdict == "pass"
    assert star_injectivity_report(star, 2, 5, seed=13).verdict == "pass"
    assert star_conjugation_report(star).verdict == "pass"


def test_star_conjugation_nonabelian():
    K = s3()
    lam = cyclic(2, "p")
    transposition = K.names.index("102")
    assert K.element_order(transposition) == 2
    sys_ = component_twist_system(lam, K, [((0, 1), [K.identity, K.identity]),
                                           ((0, 1), [K.identity, transposition])])
    star = StarAction(cyclic(2, "c"), sys_)
    assert star_conjugation_report(star).verdict == "pass"
    assert star_relation_report(star, 2, 3, seed=14).verdict == "pass"


def test_star_conjugate_case_word_part_is_relabeling():
    star = StarAction(cyclic(2, "c"), z2_system())
    om = star.omega()
    for y in sample_stream(star.space, 15, 5):
        for g in ball(star.spec0, 2, mode="syllables"):
            w, _ = om.evaluate(g, y)
            assert w == star.to_spec1(g.spec.word(g.tokens()))


def test_star_point_dependent_word_part():
    # mixed per-component automorphisms of Z/3 make the word part of the
    # transport genuinely point-dependent
    lam, K = cyclic(3, "p"), cyclic(2, "k")
    ident_aut = (0, 1, 2)
    inversion = (0, 2, 1)
    trivial = [0, 0, 0]
    sys_ = component_twist_system(lam, K, [(ident_aut, trivial), (inversion, trivial)])
    star = StarAction(cyclic(2, "c"), sys_)
    lam_letter = star.spec0.finite_element(star.lam0, 1)
    om = star.omega()
    seen = set()
    for y in sample_stream(star.space, 16, 10):
        seen.add(om.evaluate(lam_letter, y)[0])
    assert len(seen) == 2
    assert star_relation_report(star, 2, 4, seed=17).verdict == "pass"
    assert star_orbit_report(star, 2, 4, seed=18).verdict == "pass"
    assert star_injectivity_report(star, 2, 4, seed=19).verdict == "pass"


# -- parenthesis matching and the cylinder system ---------------------------------


def zconfig(values: dict, seed=0):
    space = IntShift(Z2).space
    return SeededConfiguration(space, seed, values)


def test_parenthesis_match_adjacent():
    z = zconfig({0: 0, 1: 1})
    assert parenthesis_match(z, 1, 8) == 1


def test_parenthesis_match_nested():
    z = zconfig({0: 0, 1: 0, 2: 1, 3: 1})
    assert parenthesis_match(z, 1, 8) == 3
    inner = IntShift(Z2).apply(1, z)
    assert parenthesis_match(inner, 1, 8) == 1


def test_parenthesis_match_involution():
    space = IntShift(Z2).space
    shift = IntShift(Z2)
    for i in range(50):
        z = SeededConfiguration(space, derive_seed(20, str(i)), {0: 0})
        try:
            m = parenthesis_match(z, 1, 128)
        except UndeterminedError:
            continue
        back = parenthesis_match(shift.apply(m, z), 1, 128, inverse=True)
        assert back == -m


def test_cylinder_measure():
    system = CylinderAction(2, 32)
    report = cylinder_measure_report(system)
    assert report.verdict == "pass"
    assert report.statistics["measure"] == Fraction(1, 2)


def test_cylinder_orbit_membership():
    system = CylinderAction(2, 64)
    om = system.omega()
    words = ball(system.spec_up, 1, parts=system.b_parts, exponent_bound=1)
    window = [system.a_coset(n) for n in range(-3, 4)]
    checked = 0
    for i in range(8):
        x = system.sample_in_cylinder(derive_seed(21, str(i)))
        cache = {}
        for g in words:
            try:
                left = system.apply(g, x)
                right = system.twisted.apply(om.evaluate(g, x, cache), x)
            except UndeterminedError:
                continue
            assert agree_on(left, right, window)
            assert left.value(system.base) == 0  # stays in the cylinder
            checked += 1
    assert checked > 20


def test_cylinder_inverse_pair_small():
    system = CylinderAction(2, 64)
    words = ball(system.spec_up, 2, parts=system.b_parts, exponent_bound=1)
    points = [system.sample_in_cylinder(derive_seed(22, str(i))) for i in range(10)]
    report = verify_inverse_pair(
        system.omega(), system.omega_prime(), words, points,
        lengths=(system.b_length_up, system.b_length_down))
    assert report.verdict in ("pass", "undetermined")
    assert report.statistics["checked"] > 0
    assert report.counterexample is None


def test_cylinder_identity_small():
    system = CylinderAction(2, 64)
    words = ball(system.spec_up, 1, parts=system.b_parts, exponent_bound=1)
    pairs = list(itertools.product(words, words))
    points = [system.sample_in_cylinder(derive_seed(23, str(i))) for i in range(5)]
    report = verify_identity(system.omega(), pairs, points)
    assert report.verdict in ("pass", "undetermined")
    assert report.counterexample is None


def test_cylinder_corrupted_matching_fails():
    system = CylinderAction(2, 64)
    good = system.omega()
    entries = dict(good.entries)
    # drop the closing-side matching word: the composite inverse breaks at
    # words of combined grade 2
    entries[("g", system.spec_up.part_index("b0"))] = \
        lambda x: system.b0 * system.phi_word(0, x)
    bad = Cocycle(system, CocycleTarget(spec=system.f2), entries, "corrupted")
    b0 = system.spec_up.generator("b0")
    words = [b0, b0 * b0]
    points = [system.sample_in_cylinder(derive_seed(24, str(i))) for i in range(10)]
    report = verify_inverse_pair(bad, system.omega_prime(), words, points)
    assert report.verdict == "fail"


def test_eta_prime_inverts_returns():
    system = CylinderAction(2, 64)
    for i in range(20):
        z = SeededConfiguration(system.zshift.space, derive_seed(25, str(i)), {0: 0})
        try:
            for n in (-2, -1, 1, 2):
                eta = system.oracle.eta(n, z)
                assert system.eta_prime(eta, z) == n
        except UndeterminedError:
            continue


def test_dependency_radius_small():
    system = CylinderAction(2, 32)
    report = dependency_radius_report(system, 2, 10, seed=26)
    assert report.verdict in ("pass", "undetermined")
    assert report.counterexample is None


def test_coset_freshness_small():
    system = CylinderAction(2, 48)
    report = coset_freshness_report(system, 1, 5, seed=27)
    assert report.verdict in ("pass", "undetermined")
    assert report.counterexample is None


def test_match_determinacy_reflects_recurrence_tail():
    # the nesting match of a fair sequence resolves within radius 64 with
    # probability ~0.9007, so the 5% gate reads fail; the measurement must
    # land near the true frequency
    report = match_determinacy_report(2, 64, 2000, seed=28)
    freq = report.statistics["unresolved_frequency"]
    assert 0.075 <= float(freq) <= 0.125
    assert report.verdict == "fail"
    assert float(report.statistics["context_frequency"]) < float(freq)


def test_match_measure_preservation_gate():
    report = match_measure_report(2, 64, 2000, seed=29)
    assert report.verdict == "pass"


# -- diagonal extension ------------------------------------------------------------


def test_extension_degenerate_whole_space():
    shift = BernoulliShift(F2, Z2)
    soe = degenerate_stable_oe(shift)
    lams = ball(F2, 1)
    report = extension_distinctness_report(soe, lams, 10, seed=30)
    assert report.verdict == "pass"
    pairs = [(1, F2.identity()), (1, F2.generator("a"))]
    report = extension_independence_report(soe, pairs, Z2, 10, seed=31)
    assert report.verdict == "pass"


def test_extension_over_cylinder_oe():
    soe = build_cylinder_oe(2, 64)
    lams = ball(soe.system.spec_up, 1, parts=soe.system.b_parts, exponent_bound=1)
    report = extension_distinctness_report(soe, lams, 10, seed=32)
    assert report.verdict in ("pass", "undetermined")
    assert report.counterexample is None
    pairs = [(1, soe.system.spec_up.identity()),
             (2, soe.system.spec_up.generator("b0"))]
    report = extension_independence_report(soe, pairs, cyclic(3), 10, seed=33)
    assert report.verdict in ("pass", "undetermined")
    assert report.counterexample is None


def test_extension_action_axiom():
    soe = build_cylinder_oe(2, 64)
    words = ball(soe.system.spec_up, 1)
    report = extension_action_report(soe, cyclic(2), words, 5, seed=34)
    assert report.verdict in ("pass", "undetermined")
    assert report.counterexample is None
    assert report.statistics["checked"] > 50


def test_star_trivial_pairing_reproduces_the_action():
    # identity pairing with a trivial K: the transported action is the
    # original one and the cocycle word is the relabeled group element
    lam, K = cyclic(2, "p"), cyclic(1, "k")
    system = component_twist_system(lam, K, [((0, 1), [0, 0])])
    star = StarAction(cyclic(2, "c"), system)
    om = star.omega()
    window = [star.base, star.base.translate(star.to_spec1(
        star.spec0.finite_element(star.gamma0, 1)))]
    for y in sample_stream(star.space, 35, 5):
        for g in ball(star.spec0, 2, mode="syllables"):
            w, k = om.evaluate(g, y)
            assert k == K.identity
            assert w == star.to_spec1(g)
            assert agree_on(star.apply(g, y), star.dot.apply(w, y), window)


# -- sections ----------------------------------------------------------------------


def test_orbit_section_z2_on_six_points():
    K = Z2
    action = free_action_on_cosets(K, 3)
    reps, theta = orbit_section(K, action)
    assert len(reps) == 3
    assert sorted(theta.values()) == list(range(6))
    assert section_report(K, action).verdict == "pass"


def test_orbit_section_z3_on_six_points():
    K = cyclic(3)
    action = free_action_on_cosets(K, 2)
    reps, _ = orbit_section(K, action)
    assert len(reps) == 2
    assert section_report(K, action).verdict == "pass"


def test_orbit_section_rejects_non_free():
    from orbitlab.actions import FiniteGroupAlphabetAction
    from orbitlab.groups import Alphabet
    K = Z2
    # the nonidentity element fixes the last point
    alphabet = Alphabet(["p0", "p1", "p2"], label="3pts")
    perms = [(0, 1, 2), (1, 0, 2)]
    action = FiniteGroupAlphabetAction(K, alphabet, perms)
    with pytest.raises(ValueError, match="fixes"):
        orbit_section(K, action)
    report = section_report(K, action)
    assert report.verdict == "fail"
    assert "p2" in report.counterexample["reason"]


def test_section_equivariance_exhaustive():
    K = cyclic(3)
    action = free_action_on_cosets(K, 2)
    reps, theta = orbit_section(K, action)
    for g in range(3):
        for h in range(3):
            for y in reps:
                assert theta[(K.mul(g, h), y)] == action.act(g, theta[(h, y)])
