import pytest
from fastapi.testclient import TestClient

from depmeter.service import app

client = TestClient(app)


def test_health():
    assert client.get("/health").json() == {"status": "ok"}


class TestCompute:
    TABLE = {
        "p": [[0.4, 0.1], [0.1, 0.4]],
        "x_labels": ["1", "2"],
        "y_labels": ["1", "2"],
    }

    def test_tau2(self):
        res = client.post(
            "/compute",
            json={"table": self.TABLE, "measures": [{"measure": "tau2"}]},
        )
        assert res.status_code == 200
        rep = res.json()["reports"][0]
        assert rep["value"] == pytest.approx(0.27, abs=1e-14)
        assert rep["upper_bound"] == pytest.approx(0.75, abs=1e-14)

    def test_multiple_measures(self):
        res = client.post(
            "/compute",
            json={
                "table": self.TABLE,
                "measures": [
                    {"measure": "mi"},
                    {"measure": "renyi", "alpha": 0.5},
                    {"measure": "bhm"},
                ],
            },
        )
        assert res.status_code == 200
        assert [r["measure"] for r in res.json()["reports"]] == [
            "mi",
            "renyi",
            "bhm",
        ]

    def test_alpha_out_of_range_is_422(self):
        res = client.post(
            "/compute",
            json={
                "table": self.TABLE,
                "measures": [{"measure": "renyi", "alpha": 2.5}],
            },
        )
        assert res.status_code == 422
        assert "alpha" in res.json()["detail"]

    def test_bad_table_is_422(self):
        bad = dict(self.TABLE, p=[[0.4, 0.1], [0.1, 0.3]])
        res = client.post(
            "/compute", json={"table": bad, "measures": [{"measure": "mi"}]}
        )
        assert res.status_code == 422


def test_conditional_endpoint():
    p = [[[0.0] * 2 for _ in range(2)] for _ in range(2)]
    for x in (0, 1):
        for z in (0, 1):
            p[x][x ^ z][z] = 0.25
    res = client.post(
        "/conditional",
        json={
            "table": {
                "p": p,
                "x_labels": ["0", "1"],
                "y_labels": ["0", "1"],
                "z_labels": ["0", "1"],
            }
        },
    )
    assert res.status_code == 200
    rep = res.json()
    assert rep["value"] == pytest.approx(0.75, abs=1e-14)
    assert rep["normalized"] == pytest.approx(1.0, abs=1e-13)


class TestExample:
    def test_oracle_values(self):
        res = client.get("/example/2")
        assert res.status_code == 200
        o = res.json()
        assert o["tau2_yx"] == pytest.approx(0.75)
        assert o["tau2_xz"] == 0.0

    def test_invalid_n_is_422(self):
        assert client.get("/example/1").status_code == 422


class TestDpiRandom:
    def test_no_violations(self):
        res = client.post(
            "/dpi/random", json={"count": 50, "seed": 11, "phi": "square"}
        )
        assert res.status_code == 200
        body = res.json()
        assert body["violations"] == 0
        assert body["min_slack"] >= -1e-10

    def test_deterministic(self):
        a = client.post("/dpi/random", json={"count": 10, "seed": 3}).json()
        b = client.post("/dpi/random", json={"count": 10, "seed": 3}).json()
        assert a == b


def test_ptest_endpoint():
    records = [[str(i % 4), str((i % 4) * 3)] for i in range(40)]
    res = client.post(
        "/ptest",
        json={"records": records, "measure": "tau2", "permutations": 99, "seed": 2},
    )
    assert res.status_code == 200
    assert res.json()["p_value"] == pytest.approx(0.01, abs=1e-12)
