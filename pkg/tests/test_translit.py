from __future__ import annotations

import random

import pytest

from sandhitutor import phonemes as ph
from sandhitutor.translit import UnsupportedSign, deva_to_iast, iast_to_deva


def test_first_vowel():
    assert iast_to_deva("a") == "अ"


def test_fused_form():
    # composed via consonant + matra; verified by the round trip
    assert iast_to_deva("rameva") == "रमेव"
    assert deva_to_iast("रमेव") == "rameva"


def test_final_consonant_takes_virama():
    assert iast_to_deva("mṛt") == "मृत्"
    assert deva_to_iast("मृत्") == "mṛt"


def test_avagraha_maps_to_unicode_sign():
    assert iast_to_deva("hare 'va") == "हरे ऽव"
    assert deva_to_iast("हरे ऽव") == "hare 'va"


def test_anusvara_visarga():
    assert iast_to_deva("saṃskṛtam") == "संस्कृतम्"
    assert iast_to_deva("hariḥ") == "हरिः"


def test_pluta_digit():
    assert iast_to_deva("devadattā3") == "देवदत्ता३"
    assert deva_to_iast("देवदत्ता३") == "devadattā3"


def test_vedic_accent_rejected():
    with pytest.raises(UnsupportedSign):
        deva_to_iast("अ॑")


def test_round_trip_fuzz():
    rng = random.Random(71)
    glyphs = [s for s in ph.PHONEMES if s != "#"] + [" "]
    for _ in range(10000):
        s = "".join(rng.choice(glyphs) for _ in range(rng.randrange(1, 12))).strip()
        if not s:
            continue
        assert deva_to_iast(iast_to_deva(s)) == s
