import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from src.main import app

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture
def client():
    return TestClient(app)


def carregar(nome: str) -> dict:
    return json.loads((CONFIGS / f"{nome}.json").read_text(encoding="utf-8"))


class TestRaiz:

    def test_status(self, client):
        resposta = client.get("/")
        assert resposta.status_code == 200
        assert resposta.json()["status"] == "QKD Sim API Running"

    def test_health(self, client):
        assert client.get("/health").json() == {"status": "healthy"}


class TestRun:

    def test_baseline(self, client):
        resposta = client.post("/scenarios/run", json=carregar("baseline"))
        assert resposta.status_code == 200
        corpo = resposta.json()
        assert corpo["summary"]["established"] is True
        assert len(corpo["transcript_sha256"]) == 64
        assert "events" not in corpo

    def test_com_eventos(self, client):
        corpo = client.post("/scenarios/run?include_events=true", json=carregar("mitm")).json()
        assert len(corpo["events"]) == corpo["event_count"]
        assert corpo["events"][0]["index"] == 0

    def test_determinismo_entre_chamadas(self, client):
        a = client.post("/scenarios/run", json=carregar("intercept")).json()
        b = client.post("/scenarios/run", json=carregar("intercept")).json()
        assert a == b

    def test_config_invalida(self, client):
        assert client.post("/scenarios/run", json={"confidence": 0.01, "xyz": 1}).status_code == 422


class TestUpload:

    def _enviar(self, client, nome, conteudo):
        return client.post("/scenarios/upload", files={"file": (nome, conteudo, "application/json")})

    def test_arquivo_valido(self, client):
        resposta = self._enviar(client, "baseline.json", (CONFIGS / "baseline.json").read_bytes())
        assert resposta.status_code == 200
        assert resposta.json()["summary"]["established"] is True

    def test_extensao_errada(self, client):
        assert self._enviar(client, "baseline.txt", b"{}").status_code == 400

    def test_vazio(self, client):
        assert self._enviar(client, "vazio.json", b"").status_code == 400

    def test_grande_demais(self, client, monkeypatch):
        monkeypatch.setenv("QKDSIM_MAX_CONFIG_BYTES", "10")
        from src.infrastructure.config import reset_settings
        reset_settings()
        assert self._enviar(client, "baseline.json", (CONFIGS / "baseline.json").read_bytes()).status_code == 400

    def test_conteudo_invalido(self, client):
        resposta = self._enviar(client, "ruim.json", json.dumps({"rounds_per_test": 3, "confidence": 0.1}).encode())
        assert resposta.status_code == 422
        assert isinstance(resposta.json()["detail"], list)


class TestSweep:

    def test_csv(self, client):
        resposta = client.post("/scenarios/sweep", json={
            "config": carregar("baseline"), "param": "key_length", "values": [16, 32], "seeds": [0, 1],
        })
        assert resposta.status_code == 200
        assert resposta.headers["content-type"].startswith("text/csv")
        linhas = resposta.text.splitlines()
        assert linhas[0].startswith("value,seed,established")
        assert len(linhas) == 5

    def test_parametro_desconhecido(self, client):
        resposta = client.post("/scenarios/sweep", json={
            "config": carregar("baseline"), "param": "seed", "values": [1],
        })
        assert resposta.status_code == 422

    def test_limite_de_linhas(self, client):
        resposta = client.post("/scenarios/sweep", json={
            "config": carregar("baseline"), "param": "key_length",
            "values": list(range(1, 101)), "seeds": list(range(100)),
        })
        assert resposta.status_code == 400


class TestDemosEConfigs:

    def test_three_pass(self, client):
        corpo = client.get("/scenarios/demos/three-pass").json()
        assert corpo["demo"] == "three-pass" and corpo["broken"] is True

    def test_demo_desconhecida(self, client):
        assert client.get("/scenarios/demos/nao-existe").status_code == 404

    def test_config_empacotada(self, client, monkeypatch):
        monkeypatch.setenv("QKDSIM_CONFIG_DIR", str(CONFIGS))
        from src.infrastructure.config import reset_settings
        reset_settings()
        corpo = client.get("/scenarios/configs/mitm_auth").json()
        assert corpo["intermediary"] == "on" and corpo["seed"] == 42
        assert client.get("/scenarios/configs/nao_existe").status_code == 404


class TestGraphQL:

    def _consultar(self, client, query: str) -> dict:
        resposta = client.post("/graphql", json={"query": query})
        assert resposta.status_code == 200
        return resposta.json()["data"]

    def test_required_rounds(self, client):
        assert self._consultar(client, "{ requiredRounds(pMax: 0.5, epsilon: 0.01) }") == {"requiredRounds": 7}

    def test_concordancia_sob_ataque(self, client):
        dados = self._consultar(client, "{ perRoundAgreementUnderAttack(thetaAb: 0.0) }")
        assert dados["perRoundAgreementUnderAttack"] == pytest.approx(0.75)

    def test_estimativa_de_quebra(self, client):
        dados = self._consultar(
            client, "{ estimateBreakYears(securityBits: 60, opsPerSecond: 1e9) { years securityBitsAtRiskInOneYear } }"
        )
        assert dados["estimateBreakYears"]["years"] == pytest.approx(36.53, abs=0.01)
        assert dados["estimateBreakYears"]["securityBitsAtRiskInOneYear"] == 54

    def test_run_scenario(self, client):
        config = json.dumps(carregar("baseline")).replace('"', '\\"')
        dados = self._consultar(
            client, f'{{ runScenario(configJson: "{config}") {{ report {{ established qber }} eventCount }} }}'
        )
        assert dados["runScenario"]["report"] == {"established": True, "qber": 0.0}
