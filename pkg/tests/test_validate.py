import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcbench.circuit import LOGICAL, PHYSICAL
from pcbench.validate import CATEGORIES, ErrorCategory as E, reports_to_csv, validate

from builders import clean_logical_data, clean_physical_data, doc, inject

LOGICAL_CATS = [c for c in CATEGORIES if not c.physical_only]


def counts(report):
    return tuple(report.counts[c] for c in CATEGORIES)


def bb(conns, extra=()):
    comps = [{"id": "arduino1", "type": "Arduino Uno"}, {"id": "breadboard1", "type": "Breadboard"},
             {"id": "led1", "type": "LED"}, *extra]
    return doc({"components": comps, "connections": conns}, PHYSICAL)


def test_clean_fixtures_are_clean(clean_physical, clean_logical):
    assert validate(clean_physical, clean_physical).clean
    assert validate(clean_logical, clean_logical).clean


def test_reversed_duplicate_is_redundant():
    c = bb([["arduino1.pin13", "breadboard1.3a"], ["breadboard1.3a", "arduino1.pin13"],
            ["led1.anode", "breadboard1.3b"]])
    r = validate(c, c)
    assert r.count(E.REDUNDANT_CONNECTION) == 1
    assert r.count(E.PIN_CONFLICT) == 0


def test_extra_and_missing_by_type(clean_physical):
    extra = doc(inject(clean_physical_data(), "ExtraneousComponent", 1), PHYSICAL)
    assert validate(extra, clean_physical).count(E.EXTRANEOUS_COMPONENT) == 1
    fewer = doc(inject(clean_physical_data(), "MissingComponent", 1), PHYSICAL)
    report = validate(fewer, clean_physical)
    assert report.count(E.MISSING_COMPONENT) == 1
    assert report.findings[0].subject == "led"


def test_ids_do_not_matter(clean_logical):
    data = clean_logical_data()
    renamed = doc(json.loads(json.dumps(data).replace('"led', '"lamp')), LOGICAL)
    assert "lamp1" in renamed.component_ids
    r = validate(renamed, clean_logical)
    assert r.count(E.EXTRANEOUS_COMPONENT) == r.count(E.MISSING_COMPONENT) == 0


def test_isolated_component_named():
    c = bb([["arduino1.pin13", "breadboard1.3a"]])
    r = validate(c, c)
    assert [f.subject for f in r.findings if f.category is E.ISOLATED_COMPONENT] == ["led1"]


def test_removing_one_components_wires_reports_exactly_it(clean_physical):
    for victim in ("led2", "resistor3"):
        conns = [c for c in clean_physical.connections
                 if victim not in {getattr(e, "component_id", None) for e in c.endpoints}]
        r = validate(clean_physical.replace(connections=conns), clean_physical)
        assert [f.subject for f in r.findings] == [victim]


def test_pin_conflict_rules():
    same_hole = bb([["arduino1.pin13", "breadboard1.5c"], ["led1.anode", "breadboard1.5c"]])
    assert validate(same_hole, same_hole).count(E.PIN_CONFLICT) == 1
    same_column = bb([["arduino1.pin13", "breadboard1.5a"], ["led1.anode", "breadboard1.5b"]])
    assert validate(same_column, same_column).count(E.PIN_CONFLICT) == 0
    triple = bb([["arduino1.pin13", "breadboard1.1a"], ["arduino1.pin13", "breadboard1.2a"],
                 ["arduino1.pin13", "breadboard1.3a"], ["led1.anode", "breadboard1.4a"]])
    assert validate(triple, triple).count(E.PIN_CONFLICT) == 2
    rail = bb([["arduino1.gnd1", "breadboard1.tn.4"], ["led1.cathode", "breadboard1.tn.4"]])
    assert validate(rail, rail).count(E.PIN_CONFLICT) == 1


def test_bypass_rules():
    direct = bb([["led1.anode", "arduino1.pin13"]])
    assert validate(direct, direct).count(E.BREADBOARD_BYPASS) == 1
    routed = bb([["led1.anode", "breadboard1.3a"], ["arduino1.pin13", "breadboard1.3b"]])
    assert validate(routed, routed).count(E.BREADBOARD_BYPASS) == 0


def test_logical_reports_skip_physical_categories(clean_logical):
    data = clean_logical_data()
    data["connections"].append(["arduino1.pin2", "led3.anode"])  # pin2 now used twice
    r = validate(doc(data, LOGICAL), clean_logical)
    assert r.count(E.PIN_CONFLICT) == r.count(E.BREADBOARD_BYPASS) == 0
    assert r.kind == LOGICAL


def test_composite_fixture_hand_built(clean_physical):
    data = clean_physical_data()
    conns = data["connections"]
    conns.append(list(reversed(conns[1])))                            # redundant
    data["components"].append({"id": "buzzer1", "type": "Piezo Buzzer"})
    conns.append(["buzzer1.pin1", "breadboard1.45a"])                 # extraneous
    data["components"] = [c for c in data["components"] if c["id"] != "resistor3"]
    conns[:] = [c for c in conns if not any(e.startswith("resistor3.") for e in c)]  # missing
    conns[:] = [c for c in conns if not any(e.startswith("led3.") for e in c)]       # isolated
    conns.append(["breadboard1.50a", "breadboard1.10a"])              # conflict on 10a
    conns.remove(["arduino1.pin3", "breadboard1.20a"])
    conns.remove(["breadboard1.20b", "resistor2.pin1"])
    conns.append(["arduino1.pin3", "resistor2.pin1"])                 # bypass
    r = validate(doc(data, PHYSICAL), clean_physical)
    assert counts(r) == (1, 1, 1, 1, 1, 1)


def test_report_json_and_csv(clean_physical):
    r = validate(doc(inject(clean_physical_data(), "PinConflict", 2), PHYSICAL), clean_physical)
    d = json.loads(r.to_json())
    assert d["counts"]["PinConflict"] == 2 and len(d["findings"]) == 2
    csv_text = reports_to_csv([("x", r)])
    assert csv_text.splitlines()[1] == "x,physical,0,0,0,0,2,0"


@pytest.mark.parametrize("cat", LOGICAL_CATS, ids=lambda c: c.value)
@pytest.mark.parametrize("k", [1, 2, 3])
def test_logical_injection(clean_logical, cat, k):
    r = validate(doc(inject(clean_logical_data(), cat.value, k), LOGICAL), clean_logical)
    assert r.counts == {c: (k if c is cat else 0) for c in CATEGORIES}


@settings(max_examples=30, deadline=None)
@given(st.randoms())
def test_report_independent_of_connection_order(rnd):
    data = inject(inject(clean_physical_data(), "PinConflict", 2), "RedundantConnection", 2)
    ref = doc(clean_physical_data(), PHYSICAL)
    shuffled = dict(data, connections=rnd.sample(data["connections"], len(data["connections"])))
    a = validate(doc(data, PHYSICAL), ref)
    b = validate(doc(shuffled, PHYSICAL), ref)
    assert a.counts == b.counts
    assert [f.category for f in a.findings] == [f.category for f in b.findings]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(CATEGORIES), st.integers(1, 3), st.randoms())
def test_additivity_under_injection(cat, k, rnd):
    """Seeding k instances of c into a clean circuit moves counts[c] by k and nothing else."""
    ref = doc(clean_physical_data(), PHYSICAL)
    data = inject(clean_physical_data(), cat.value, k)
    data["connections"] = rnd.sample(data["connections"], len(data["connections"]))
    r = validate(doc(data, PHYSICAL), ref)
    assert r.counts == {c: (k if c is cat else 0) for c in CATEGORIES}


def test_self_validation_of_bundled_references(projects):
    for p in projects:
        assert validate(p.logical, p.logical).clean
        assert validate(p.physical, p.physical).clean
