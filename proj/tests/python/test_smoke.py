import json
import os
from pathlib import Path

import pytest

import farmrec

FIXTURES = Path(os.environ.get("FARMREC_FIXTURES", Path(__file__).resolve().parents[1] / "fixtures"))
OWNER = farmrec.Actor.principal("owner")


@pytest.fixture
def hort():
    service = farmrec.Service()
    doc = service.create_base(OWNER, "Demo Farm", template="hort-activity")
    return service, doc


def test_templates_listed():
    ids = {tid for tid, _ in farmrec.templates()}
    assert ids == {"field-records", "hort-activity", "fsma", "marketing-delivery"}


def test_demo_export_matches_fixture(hort):
    service, doc = hort
    ids = service.run_demo(OWNER, doc["id"])
    assert len(ids) == 7
    exported = service.export_csv(OWNER, doc["id"], "Activities", preset="table1")
    assert exported == (FIXTURES / "table1.csv").read_bytes().decode("utf-8")


def test_conditional_fields_follow_draft(hort):
    service, doc = hort
    form = doc["forms"][0]["id"]
    names = lambda draft: {e["name"] for e in service.render_form(OWNER, form, draft)["entries"]}
    assert "Seeding Rate" not in names({})
    assert "Seeding Rate" in names({"What": "Plant/Transplant"})
    assert "Products applied" in names({"What": "Spread/Spray"})


def test_submit_with_token_and_idempotency(hort):
    service, doc = hort
    form = doc["forms"][0]["id"]
    token = farmrec.Actor.form_token(service.mint_form_token(OWNER, form))
    answers = {"Who": "Purdue Pete", "Where": "Bed 72", "What": "Scout", "Notes": "all good"}
    added = [("Who", "Purdue Pete"), ("Where", "Bed 72")]
    first = service.submit(token, form, answers, added, idempotency_key="k1")
    again = service.submit(token, form, answers, added, idempotency_key="k1")
    assert not first["replayed"] and again["replayed"]
    assert again["id"] == first["id"]
    assert len(service.query(OWNER, doc["id"], "Activities")) == 1


def test_validation_error_carries_code(hort):
    service, doc = hort
    with pytest.raises(farmrec.FarmrecError) as info:
        service.insert_record(OWNER, doc["id"], "Activities", {"Duration": "forty"})
    assert info.value.args[0] == "type-mismatch"
    with pytest.raises(farmrec.FarmrecError) as denied:
        service.get_base(farmrec.Actor.anonymous(), doc["id"])
    assert denied.value.args[0] == "unauthenticated"


def test_http_dispatch(hort):
    service, doc = hort
    token = service.add_principal("owner")
    status, _, body = farmrec.http_request(service, "GET", "/bases/" + doc["id"])
    assert status == 401
    status, ctype, body = farmrec.http_request(
        service, "GET", "/bases/" + doc["id"], headers={"Authorization": "Bearer " + token})
    assert status == 200 and ctype == "application/json"
    assert json.loads(body)["name"] == "Demo Farm"
    assert "/bases" in farmrec.openapi()["paths"]


def test_persistence_across_instances(tmp_path):
    first = farmrec.Service(str(tmp_path))
    doc = first.create_base(OWNER, "Kept", template="field-records")
    first.insert_record(OWNER, doc["id"], "Field Records",
                        {"Date": "2022-12-20", "Notes": "first frost"})
    seq = first.journal_seq(doc["id"])
    del first
    second = farmrec.Service(str(tmp_path))
    assert second.journal_seq(doc["id"]) == seq
    assert len(second.query(OWNER, doc["id"], "Field Records")) == 1
