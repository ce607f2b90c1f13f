"""Independent reference implementation of the original Porter algorithm.

Exists only to generate and cross-check the frozen stemming fixture
(tests/data/porter_pairs.txt).  Deliberately written in a different style
from the package implementation: consonant/vowel signature strings plus
declarative rule tables evaluated by a generic longest-match engine.

Regenerate the fixture with:

    python tests/porter_reference.py > tests/data/porter_pairs.txt
"""

from __future__ import annotations

import re


def _signature(word: str) -> str:
    sig = ""
    for i, ch in enumerate(word):
        if ch in "aeiou" or (ch == "y" and i > 0 and sig[i - 1] == "c"):
            sig += "v"
        else:
            sig += "c"
    return sig


def _m(stem: str) -> int:
    return len(re.findall(r"v+c", _signature(stem)))


def _has_vowel(stem: str) -> bool:
    return "v" in _signature(stem)


def _double_c(word: str) -> bool:
    return len(word) >= 2 and word[-1] == word[-2] and _signature(word)[-1] == "c"


def _cvc(word: str) -> bool:
    return (
        len(word) >= 3
        and _signature(word)[-3:] == "cvc"
        and word[-1] not in "wxy"
    )


def _longest_match(word, rules):
    """Pick the rule with the longest suffix that matches; apply it only if
    its condition holds on the remaining stem."""
    best = None
    for rule in rules:
        if word.endswith(rule[0]) and (best is None or len(rule[0]) > len(best[0])):
            best = rule
    if best is None:
        return word
    suffix, repl, cond = best
    stem = word[: len(word) - len(suffix)]
    if cond(stem):
        return stem + repl
    return word


_ALWAYS = lambda stem: True
_M0 = lambda stem: _m(stem) > 0
_M1 = lambda stem: _m(stem) > 1

_STEP1A = [
    ("sses", "ss", _ALWAYS),
    ("ies", "i", _ALWAYS),
    ("ss", "ss", _ALWAYS),
    ("s", "", _ALWAYS),
]

_STEP2 = [
    ("ational", "ate", _M0), ("tional", "tion", _M0), ("enci", "ence", _M0),
    ("anci", "ance", _M0), ("izer", "ize", _M0), ("abli", "able", _M0),
    ("alli", "al", _M0), ("entli", "ent", _M0), ("eli", "e", _M0),
    ("ousli", "ous", _M0), ("ization", "ize", _M0), ("ation", "ate", _M0),
    ("ator", "ate", _M0), ("alism", "al", _M0), ("iveness", "ive", _M0),
    ("fulness", "ful", _M0), ("ousness", "ous", _M0), ("aliti", "al", _M0),
    ("iviti", "ive", _M0), ("biliti", "ble", _M0),
]

_STEP3 = [
    ("icate", "ic", _M0), ("ative", "", _M0), ("alize", "al", _M0),
    ("iciti", "ic", _M0), ("ical", "ic", _M0), ("ful", "", _M0),
    ("ness", "", _M0),
]

_STEP4 = [
    ("al", "", _M1), ("ance", "", _M1), ("ence", "", _M1), ("er", "", _M1),
    ("ic", "", _M1), ("able", "", _M1), ("ible", "", _M1), ("ant", "", _M1),
    ("ement", "", _M1), ("ment", "", _M1), ("ent", "", _M1),
    ("ion", "", lambda stem: _m(stem) > 1 and stem[-1:] in ("s", "t")),
    ("ou", "", _M1), ("ism", "", _M1), ("ate", "", _M1), ("iti", "", _M1),
    ("ous", "", _M1), ("ive", "", _M1), ("ize", "", _M1),
]


def reference_stem(word: str) -> str:
    if len(word) < 3:
        return word
    w = _longest_match(word, _STEP1A)

    # step 1b with its fix-up pass
    if w.endswith("eed"):
        if _m(w[:-3]) > 0:
            w = w[:-1]
    else:
        for suffix in ("ed", "ing"):
            if w.endswith(suffix) and _has_vowel(w[: -len(suffix)]):
                w = w[: -len(suffix)]
                if w[-2:] in ("at", "bl", "iz"):
                    w += "e"
                elif _double_c(w) and w[-1] not in "lsz":
                    w = w[:-1]
                elif _m(w) == 1 and _cvc(w):
                    w += "e"
                break

    if w.endswith("y") and _has_vowel(w[:-1]):
        w = w[:-1] + "i"

    w = _longest_match(w, _STEP2)
    w = _longest_match(w, _STEP3)
    w = _longest_match(w, _STEP4)

    if w.endswith("e"):
        stem = w[:-1]
        if _m(stem) > 1 or (_m(stem) == 1 and not _cvc(stem)):
            w = stem
    if _m(w) > 1 and _double_c(w) and w.endswith("l"):
        w = w[:-1]
    return w


# Vocabulary for the frozen fixture: inflected/derived families exercising
# every rule, plus ordinary prose words and a few degenerate shapes.
FIXTURE_WORDS = """
abilities ability absorption abstraction accepted accessibility accidentally
accommodation accompanied accomplishment accountability accumulate
accumulation achievement acknowledgement acquisition action activate
activation actively adaptation additional adjustable adjustment adoption
advertisement advisable agencies aggressiveness agreed agreement airliner
allowance ally alternatively amazement amusement analogously analytical
angularities animated announcement anticipated apologies apparently appeases
applicability application appreciation approximation arguably argumentation
arrangement articulation assessment assignment association atomization
attentively attraction authorization automatically availability awfully
babies bases basically battles beautiful beauties becoming bees befitting
beginnings behavioral believable belonging beneficial betterment bicycles
binding biological bitterness bleeding blessedness blindingly bodies boldly
bombardment bonuses bookkeeping boundaries bravely breathless brightness
broadcasting brutalities bubbles buildings businesses buzzing
cabinets calculation calibration calmness canonical capabilities capacities
captivities carefully caresses carriages cartoonish categories causation
cautiously ceaselessly celebration centralization ceremonies certainties
championship changed charges cheerfulness chemically childishness choices
chronicles circulation cities citizenship civilization claimed
classification cleverness clinical closeness cloudiness coldness collations
collectively colonies colonization combination comfortably commercialism
communities comparabilities comparative compensation competitiveness
computerization conceivable concentration conditional conferences
configuration conflated conformabli confused connection consciousness
conservation considerably consistencies constitutional construction
contemplated contention continuation contradiction controlling conversion
cooperation coordination copies correction correlation corruption
counterfeiting courageously creativity credibilities crises criticality
crucially crystallization cultivated curiosities cyclical
daily dancing dangerously darkness databases deactivated debatable decencies
decisiveness declaration dedication defensible deficiencies definitely
deliberately delicately demonstration deniable densities dependent
depositories depression derivation descriptive designation desperately
destabilization detection determination devastatingly deviation devotedly
dictionaries differences differentiation digitizer dignities dimensional
directional disabilities disagreement disappointment discoveries
discussion dismissal disposal dissatisfaction distances distinctiveness
distribution diversities dividing doctrines documentation domestically
dominance donations doubtful dramatically dreaming dryness duties dying
eagerly earliest earnings easily eating economically edges editorial
education effectiveness efficiencies elaboration electrical electricity
elimination emotionally emphasized employment emptiness enablement
encouragement endangered endlessly endurance energies enforcement engagement
engineering enjoyment enlargement enormously entities entertainment
enthusiasm entirely environmental equality equations equivalently
essentially establishment estimation eternally evaluation eventually
evidently evolutionary exactness examination exceedingly exceptionally
excessively exclusion execution exemption exercises existence expansion
expectation expenses experiences experimentation explanation exploration
explosion expression extension extraction extremities
fabrication facilities factories failing failures fairness faithfully
falling falsification familiarities famously fanciful fascination
fashionable fatalities favorable fearfully feathered federalism feeding
feelings fellowship fertilities festivities fictional finalization
financially findings firmness fisheries fitting fixation flammable
flexibilities flies floating fluctuation forcefully forgiveness formalities
formalize formation formative fortunately foundation fractional fragilities
freedoms frequencies freshness friendliness frighteningly functionality
fundamentally furnished futuristic
gardening gatherings generalizations generously gentleness genuinely
geographical glasses globalization gloriously goodness governance
gracefully grandiose gratefully greatness guidance
habitually handling happily happiness hardness harmfully harmonies
hatefulness headaches healthiness hearings heartily heaviness helpfulness
hesitancies hierarchies highlighted historically homelessness honestly
hopefulness hopelessly hopping horizontally hospitalities hostilities
humanities humidities hurriedly hypothetically
identically identification identities ideological illustration imagination
imitation immediately immensities immunities implementation implication
importantly impossibilities impression improvement inclusion incorporation
independently indications individualism industrialization industries
inevitably inference infinities inflation influentially informational
injuries innovation inquiries insertion insistence inspection inspiration
installation instantly institutional instruction insurance integration
intelligently intensities intentionally interaction internally
interpretation interruption intervention introduction invention
investigation invisibilities irritant isolation iterations
jealousies joyfully judgement justification justifiably
keenness kindness kingdoms knowingly
laboratories landings lateness laughable lawfully leaderships leanings
legalization legislation lengthened liabilities liberation libraries
lifelessness lightness likelihood limitation listings literally livelihood
liveliness loneliness longingly loudness loveliness loyalties luckily
luminosities
machineries magically magnification maintenance majorities manageable
manipulation manufacturing marginally marvelously massively materialism
mathematically maturities meaningfully measurement mechanization meditation
melodies memories mentalities mercifully metallic methodologies migration
mildness minimization ministries minorities miraculously miseries
mobilities moderation modernization modification momentarily monopolies
moralities motivation motoring mountainous movement multiplication
municipalities mysteriously
narration nationalities naturally navigation nearness necessities
negotiation neighborhoods nervously neutralities newness nobilities
nominally normalization notation noteworthiness noticeably notification
nourishment novelties numbered numerically
obedience objection obligation observation obsession obtainable obviously
occasionally occupation occurrences offensively officially operation
operator opportunities opposition oppression optimization optionally
organization originality ornamentation oscillators outstandingly
overwhelmingly ownership
painfully parallelism participation particularities partnership passionately
patiently peacefully peculiarities penalties perceptively perfection
performances permanently permission persistence personalities persuasion
pessimism photographic physically plasticities playfully pleasantness
policies politically popularities population portrayal possession
possibilities powerfully practically precaution precisely prediction
preferences preparation presentation preservation pressing prevention
primarily principalities priorities privatization probabilities procedures
proclamation production professionalism profitabilities programming
progression prohibition projection promotion pronunciation properties
proportional proposition prosperities protection provision psychological
publication punishment purification purposefully
qualification qualities quantities quarterly questionable quickness
quietness
radiation radically rapidly rarities rational rationalization reaction
readiness realistically realities realization reasonably rebellion
receptively recognition recommendation reconciliation reconstruction
recovering recreation redness reduction redundancies references refinement
reflection reformation refusal regularities regulation rehabilitation
relation relational relationship relatively relaxation reliabilities
religiously remarkable remembrance renewable repeatedly replacement
representation repression reproduction reputation requirement researching
resemblance reservation resignation resistance resolution respectfully
responsibilities restlessness restoration restriction retention retirement
revelation revival revolutionary rigidities robberies romantically
roughness routinely royalties
sadness safeties salaries satisfaction savagely scarcities scheduling
scientifically secrecies sectional securities selection selfishness
sensational sensibilities sensitivities sentimentalities separation
seriousness settlement severities sharpness shipping shortness shyness
signification similarities simplification simulation sincerely situational
skies sleepiness slightly smoothness socialism societies softness solidarity
solution sophistication sorrowfully specialization specification spectacular
speculation spirituality splendidly spontaneously stabilities standardization
statistically steadiness sterilities stimulation storages strangeness
strategically strengthened stressful structural stubbornness studies
stupidities subjection submission subscription substantially subtraction
successfully suddenness sufficiencies suggestion summaries superiorities
supervision supplies supportive suppression surprisingly suspension
sustainability swiftness syllables symbolically sympathies synthesized
systematically
tactically talented tangible taxation teachings technicalities technologies
tediously temporarily tenancies tendencies tenderness tensions terminally
territories testimonies theoretically thickness thirstily thoughtfulness
tidiness timelessness tiredness tolerance totalities touchingly toughness
traditionally tranquilities transformation translation transmission
transportation treaties tremendously trembling trivialities troubled
trustworthiness truthfully typically
ugliness ultimately unanimously uncertainties understandably unemployment
unification uniformities unities universalities unlikely urgencies
usefulness utilities utilization
vacancies validation valuation variation varieties vastness ventilation
verification versatilities vibration viciously victories vigorously
violation virtualization visibilities vitalities vividly vocalization
voluntarily vulnerabilities
wanderings warmness watchfulness weaknesses wealthiest weariness weddings
weightless wilderness willingness windings wisely withdrawal witnesses
wonderfully worthiness wrongfully
yearnings yielding youthfulness
zealously
sses ties caress cats feed agreed plastered bled motoring sing conflated
sized tanned hissing fizzed failed filing happy sky valenci hesitanci
radicalli differentli vileli analogousli vietnamization predication
feudalism callousness formaliti sensitiviti sensibiliti triplicate
electriciti hopeful allowance inference gyroscopic adjustable irritant
homologou communism activate angulariti homologi effective bowdlerize
probate rate cease controll roll oats tree trees ivy by a be on it
""".split()

# Full-pipeline outputs for the classic demonstration vocabulary (the
# well-known word list circulated with the original algorithm), plus a few
# other widely-quoted whole-word results.  These anchor both implementations
# against external ground truth.
_CANONICAL = [
    ("caresses", "caress"), ("flies", "fli"), ("dies", "di"),
    ("mules", "mule"), ("denied", "deni"), ("died", "di"),
    ("agreed", "agre"), ("owned", "own"), ("humbled", "humbl"),
    ("sized", "size"), ("meeting", "meet"), ("stating", "state"),
    ("siezing", "siez"), ("itemization", "item"),
    ("sensational", "sensat"), ("traditional", "tradit"),
    ("reference", "refer"), ("colonizer", "colon"), ("plotted", "plot"),
    ("ponies", "poni"), ("ties", "ti"), ("cats", "cat"),
    ("feed", "feed"), ("sky", "sky"), ("sing", "sing"),
    ("hopping", "hop"), ("tanned", "tan"), ("falling", "fall"),
    ("hissing", "hiss"), ("fizzed", "fizz"), ("filing", "file"),
    ("happy", "happi"), ("rate", "rate"), ("roll", "roll"),
    ("generalizations", "gener"), ("oscillators", "oscil"),
]


def canonical_pairs() -> list[tuple[str, str]]:
    return list(_CANONICAL)


def fixture_vocabulary() -> list[str]:
    words = sorted({w for w in FIXTURE_WORDS if w.isascii() and w.isalpha()})
    return words


if __name__ == "__main__":
    print("# word -> stem pairs frozen from the reference implementation")
    print("# regenerate: python tests/porter_reference.py > tests/data/porter_pairs.txt")
    for word in fixture_vocabulary():
        print(f"{word}\t{reference_stem(word)}")
