import os

from fastapi.testclient import TestClient

from handlecalc.service import build_app

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def fixture(name):
    return open(os.path.join(FIXTURES, name), encoding="utf-8").read()


def client():
    return TestClient(build_app())


def test_create_session_empty():
    c = client()
    r = c.post("/session", json={"text": "diagram empty\n"})
    assert r.status_code == 200
    body = r.json()
    assert body["summary"]["components"] == 0
    assert body["recognize"] == "EmptyS4orB5"


def test_unknown_session_404():
    c = client()
    assert c.get("/session/zz").status_code == 404


def test_malformed_body_400():
    c = client()
    r = c.post("/session", json={"text": "diagram x\nbogus\n"})
    assert r.status_code == 400


def test_list_moves_cancelling_pair():
    c = client()
    text = """\
diagram pair
component D dotted :
component C framed:4 : p
piercing q disk=D strand=C.p sign=+
"""
    sid = c.post("/session", json={"text": text}).json()["id"]
    moves = c.get(f"/session/{sid}/moves").json()["moves"]
    lines = [m["line"] for m in moves]
    assert "kirby pair12 annihilate site=D" in lines


def test_every_listed_move_is_accepted():
    c = client()
    sid = c.post("/session", json={"text": fixture("s4_to_homology_sphere.hgd")}).json()[
        "id"
    ]
    moves = c.get(f"/session/{sid}/moves").json()["moves"]
    for m in moves:
        r = c.post(f"/session/{sid}/move", json={"line": m["line"]})
        assert r.status_code == 200, (m, r.json())
        c.post(f"/session/{sid}/undo")


def test_pair23_annihilate_and_invariants_unchanged():
    c = client()
    text = "diagram u\ncomponent U framed:0 :\ncomponent K framed:2 :\n"
    sid = c.post("/session", json={"text": text}).json()["id"]
    inv0 = c.get(f"/session/{sid}/invariants").json()["values"]
    r = c.post(
        f"/session/{sid}/move", json={"line": "kirby pair23 annihilate site=U"}
    )
    assert r.status_code == 200
    body = r.json()
    assert "U" in body["delta"]["removed"]
    inv1 = c.get(f"/session/{sid}/invariants").json()["values"]
    assert inv0 == inv1


def test_apply_then_undo_restores_bytes():
    c = client()
    sid = c.post("/session", json={"text": fixture("mazur_double.hgd")}).json()["id"]
    before = c.get(f"/session/{sid}").json()["text"]
    r = c.post(f"/session/{sid}/move", json={"line": "kirby slide22 i=K j=Km1"})
    assert r.status_code == 200
    assert r.json()["text"] != before
    after_undo = c.post(f"/session/{sid}/undo").json()["text"]
    assert after_undo == before


def test_rejected_move_is_422_with_diagnostic():
    c = client()
    sid = c.post("/session", json={"text": "diagram e\n"}).json()["id"]
    r = c.post(f"/session/{sid}/move", json={"line": "kirby pair23 annihilate site=Z"})
    assert r.status_code == 422
    assert "Z" in r.json()["detail"]


def test_render_graph_in_state():
    c = client()
    sid = c.post("/session", json={"text": fixture("wu.hgd")}).json()["id"]
    body = c.get(f"/session/{sid}").json()
    nodes = {n["id"]: n for n in body["graph"]["nodes"]}
    assert nodes["ua"]["side"] == "alpha"
    assert nodes["ub"]["side"] == "beta"
    kinds = {e["kind"] for e in body["graph"]["edges"]}
    assert "vertex" in kinds and "piercing" in kinds
