import numpy as np
import pytest

from moebius_colorcode.decoder import (
    ComparativeConfig,
    DecoderKind,
    Variant,
    alternative_matching,
    decode,
    decode_comparative,
    decode_moebius,
    decode_success,
    fast_parity,
    should_switch,
)
from moebius_colorcode.lattice import Color, QubitKind, build_lattice, logical_parity, syndrome
from moebius_colorcode.unified import UNREACHABLE, build_unified, defect_nodes


def _setup(d):
    return build_lattice(d), build_unified(d)


def test_empty_syndrome():
    lat, u = _setup(5)
    res = decode_moebius(u, syndrome(lat, []))
    assert (res.predicted_parity, res.ell, res.matching.pairs) == (0, 0, ())
    assert alternative_matching(u, syndrome(lat, [])) is None
    assert decode_comparative(u, syndrome(lat, [])).ell == 0
    assert decode_success(lat, u, [], "comparative")


@pytest.mark.parametrize("d", [3, 5, 7, 9, 11, 13])
def test_every_single_qubit_error_is_corrected(d):
    lat, u = _setup(d)
    green = set(lat.boundary[Color.G])
    for q in range(lat.n_qubits):
        res = decode_moebius(u, syndrome(lat, [q]))
        assert res.ell == 3
        assert res.predicted_parity == (q in green)
        assert decode_success(lat, u, [q], "moebius")


@pytest.mark.parametrize("d", [5, 7, 9])
def test_single_qubit_errors_never_switch(d):
    lat, u = _setup(d)
    for q in range(lat.n_qubits):
        res = decode_comparative(u, syndrome(lat, [q]))
        assert res.variant is Variant.ORIGINAL
        assert res.ell_alt - res.ell_or > 1


def _check_alternative(u, s):
    orig = decode_moebius(u, s)
    alt = alternative_matching(u, s, orig)
    if alt is None:
        return False
    nodes = sorted(defect_nodes(u, s))
    assert sorted(x for p in alt.matching.pairs for x in p) == nodes
    # parity recomputed from the final edge list
    total, parity = 0, 0
    for (a, b), r in zip(alt.matching.pairs, alt.required_parity):
        length = int(u.class_len[r, a, b])
        assert length < UNREACHABLE
        total += length
        parity ^= r
    assert parity == alt.parity == 1 - orig.predicted_parity
    assert total == alt.ell
    assert alt.ell >= orig.ell_or
    return True


@pytest.mark.parametrize("d", [5, 7, 9])
def test_parity_flip_invariant(d):
    lat, u = _setup(d)
    rng = np.random.default_rng(d)
    found = 0
    for _ in range(10_000):
        w = int(rng.integers(1, d + 2))
        e = rng.choice(lat.n_qubits, w, replace=False)
        found += _check_alternative(u, syndrome(lat, e))
    assert found > 9_000


def test_physicality_parity_d5():
    lat, u = _setup(5)
    n = lat.n_qubits
    masks = np.zeros(n, dtype=np.int64)
    for q, fs in enumerate(lat.qubit_faces):
        for f in fs:
            masks[q] |= 1 << f
    green = sum(1 << q for q in lat.boundary[Color.G])
    errors = np.arange(1 << n, dtype=np.int64)
    syn = np.zeros_like(errors)
    weight = np.zeros_like(errors)
    for q in range(n):
        bit = (errors >> q) & 1
        syn ^= bit * masks[q]
        weight += bit
    cls = np.zeros_like(errors)
    g = errors & green
    for q in range(n):
        cls ^= (g >> q) & 1
    big = n + 1
    minw = np.full((1 << lat.n_faces, 2), big, dtype=np.int64)
    np.minimum.at(minw, (syn, cls), weight)
    for s_bits in np.unique(syn):
        faces = [f for f in range(lat.n_faces) if (s_bits >> f) & 1]
        s = syndrome(lat, [])
        s = type(s)(tuple((f, lat.face_color[f]) for f in faces))
        res = decode_moebius(u, s)
        assert minw[s_bits, res.predicted_parity] < big
        assert res.ell % 2 == minw[s_bits, res.predicted_parity] % 2, faces


def _red_strings(lat, rng, count, max_steps):
    """Random strings grown from the red boundary, ending on one green and one blue defect."""
    faces_of = [set(fs) for fs in lat.qubit_faces]
    moves = {}
    for q1 in range(lat.n_qubits):
        for q2 in range(q1 + 1, lat.n_qubits):
            if len(faces_of[q1] & faces_of[q2]) == 2:
                toggled = faces_of[q1] ^ faces_of[q2]
                if len(toggled) == 2:
                    for f in toggled:
                        moves.setdefault(f, []).append(((q1, q2), (toggled - {f}).pop()))
    starts = [q for q, c in enumerate(lat.qubit_class) if c.kind is QubitKind.BOUNDARY and c.color == Color.R]
    out = []
    while len(out) < count:
        q0 = int(rng.choice(starts))
        e = {q0}
        defects = {lat.face_color[f]: f for f in lat.qubit_faces[q0]}
        for _ in range(int(rng.integers(0, max_steps + 1))):
            c = Color.G if rng.random() < 0.5 else Color.B
            (q1, q2), new = moves[defects[c]][rng.integers(len(moves[defects[c]]))]
            e ^= {q1, q2}
            defects[c] = new
        s = syndrome(lat, e)
        if sorted(s.faces) == sorted(defects.values()) and len(s) == 2:
            out.append((sorted(e), defects[Color.G], defects[Color.B]))
    return out


@pytest.mark.parametrize("d", [9, 11])
def test_strings_from_red_boundary(d):
    lat, u = _setup(d)
    rng = np.random.default_rng(d)
    checked = 0
    for e, g, b in _red_strings(lat, rng, 3000, d):
        w = len(e)
        w_g = int(u.dist_len[2 * g, 2 * g + 1]) // 2
        w_b = int(u.dist_len[2 * b, 2 * b + 1]) // 2
        if w + w_g + w_b != d:
            continue
        if 2 * w + 1 < 2 * (w_g + w_b):
            assert decode_success(lat, u, e, "moebius"), (e, w, w_g, w_b)
            checked += 1
    assert checked >= 20


@pytest.mark.parametrize("name,d,ell_or,ell_alt", [
    ("moebius_fail_d9.json", 9, 11, 12),
    ("moebius_fail_d11.json", 11, 12, 13),
])
def test_worked_failures(fixture_error, name, d, ell_or, ell_alt):
    fx = fixture_error(name)
    assert fx["d"] == d
    lat, u = _setup(d)
    e = fx["error"]
    assert len(e) == (d - 1) // 2
    s = syndrome(lat, e)
    orig = decode_moebius(u, s)
    assert orig.ell_or == ell_or
    assert orig.predicted_parity != logical_parity(lat, e)
    assert not decode_success(lat, u, e, "moebius")
    alt = alternative_matching(u, s, orig)
    assert alt.ell == ell_alt
    assert should_switch(ell_or, ell_alt, d)
    res = decode_comparative(u, s)
    assert res.variant is Variant.ALTERNATIVE
    assert (res.ell_or, res.ell_alt, res.ell) == (ell_or, ell_alt, ell_alt)
    assert decode_success(lat, u, e, "comparative")


def test_switch_rule_examples():
    assert should_switch(11, 12, 9)
    assert should_switch(12, 13, 11)
    assert not should_switch(11, 13, 9)
    assert not should_switch(12, 13, 9)
    assert not should_switch(11, 12, 9, upsilon=2)


def test_upsilon_controls_switch(fixture_error):
    lat, u = _setup(9)
    s = syndrome(lat, fixture_error("moebius_fail_d9.json")["error"])
    assert decode_comparative(u, s, ComparativeConfig(upsilon=2)).variant is Variant.ORIGINAL
    assert decode_comparative(u, s, ComparativeConfig(enabled=False)).variant is Variant.ORIGINAL


def test_config_validation():
    with pytest.raises(ValueError):
        ComparativeConfig(upsilon=0)
    with pytest.raises(ValueError):
        DecoderKind.parse("hypergraph")


@pytest.mark.parametrize("variant", ["moebius", "comparative"])
def test_compiled_path_agrees_with_api(variant):
    lat, u = _setup(7)
    rng = np.random.default_rng(1)
    for _ in range(1000):
        e = rng.choice(lat.n_qubits, int(rng.integers(1, 9)), replace=False).tolist()
        res = decode(u, syndrome(lat, e), variant)
        parity, ell_or, ell_alt, switched = fast_parity(7, e, variant)
        assert parity == res.predicted_parity
        assert ell_or == res.ell_or
        assert switched == (res.variant is Variant.ALTERNATIVE)
        if switched:
            assert ell_alt == res.ell_alt


def test_invariants_of_result():
    lat, u = _setup(9)
    rng = np.random.default_rng(4)
    for _ in range(300):
        e = rng.choice(lat.n_qubits, 6, replace=False)
        res = decode_moebius(u, syndrome(lat, e))
        assert res.ell == sum(int(u.dist_len[a, b]) for a, b in res.matching.pairs)
        par = 0
        for a, b in res.matching.pairs:
            par ^= int(u.dist_parity[a, b])
        assert par == res.predicted_parity


def test_deterministic():
    lat, u = _setup(11)
    rng = np.random.default_rng(8)
    for _ in range(50):
        s = syndrome(lat, rng.choice(lat.n_qubits, 8, replace=False))
        assert decode_comparative(u, s) == decode_comparative(u, s)
