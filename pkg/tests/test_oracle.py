from wirecalc.oracle import (
    agreement,
    base_words,
    enumerate_diagrams,
    fixed_signature,
    interchange_trials,
)


def test_fixed_signature_shape():
    sig = fixed_signature()
    assert len(sig.category_names()) == 3
    assert len(sig.functor_names()) == 6
    cells = sig.family_names()
    assert len(cells) == 6
    widths = {
        name: (len(sig.instantiate_family(name, ())[0]),
               len(sig.instantiate_family(name, ())[1]))
        for name in cells
    }
    assert any(w[0] == 0 for w in widths.values())  # a zero-input cell
    assert any(w[0] == 2 for w in widths.values())  # a two-input cell


def test_base_words_composable():
    sig = fixed_signature()
    for w in base_words(sig, 3):
        sig.word(w.anchor, w.syms)


def test_enumeration_is_deduplicated():
    sig = fixed_signature()
    ds = enumerate_diagrams(sig, 2, base_words(sig, 1))
    assert len(ds) == len(set(ds))


def test_small_agreement_sweep():
    sig = fixed_signature()
    n, comps, mismatches = agreement(sig, max_levels=3, word_len=2)
    assert n > 100
    assert mismatches == []


def test_interchange_trials_seeded_and_reproducible():
    a = interchange_trials(42, 50)
    b = interchange_trials(42, 50)
    assert a == [] and b == []
