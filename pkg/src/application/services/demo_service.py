"""
Demonstrações prontas. Cada uma devolve um dicionário serializável em JSON
com os números que a ilustram; CLI e API só formatam.
"""

import logging
import math
from typing import Callable

import numpy as np

from src.application.dto.scenario_schema import ScenarioConfig
from src.application.services.adversary_service import per_round_agreement_under_attack
from src.application.services.scenario_service import run_scenario
from src.application.services.strawman_service import (
    eve_break_three_pass,
    rsa_anecdote,
    security_bits_at_risk,
    supercomputer_scenario,
    three_pass_exchange,
)
from src.domain.entities.attack import AnglePolicy
from src.domain.entities.quantum import MeasurementAngle, default_angle_set
from src.domain.exceptions import UnknownDemo
from src.shared.utils.bits import bits_to_str

logger = logging.getLogger(__name__)

DEMO_SEEDS = range(20)


def demo_three_pass() -> dict:
    t = three_pass_exchange("1010", "0110", "0011")
    recuperada = eve_break_three_pass(t)
    return {
        "message": "1010",
        "passes": [bits_to_str(t.pass1), bits_to_str(t.pass2), bits_to_str(t.pass3)],
        "eve_recovered": bits_to_str(recuperada),
        "broken": bits_to_str(recuperada) == "1010",
    }


def _mitm_config(intermediary: str) -> ScenarioConfig:
    return ScenarioConfig(
        confidence=0.01,
        key_length=128,
        attack={"type": "mitm"},
        intermediary=intermediary,
        message={"text": "oi Bob"},
        seed=7,
    )


def demo_mitm() -> dict:
    linhas = {}
    for modo in ("off", "on", "on_with_insider"):
        r = run_scenario(_mitm_config(modo))
        linhas[modo] = {
            "established": r.report.established,
            "eve_known_fraction": r.report.eve_known_fraction,
            "mitm_completed": bool(r.mitm and r.mitm.completed),
            "pads_match": None if r.mitm is None else r.mitm.pads_match,
        }
    return {"intermediary": linhas}


def demo_insider() -> dict:
    """Mesma escuta no fio; só muda se AL tem alguém de dentro."""
    linhas = {}
    for modo in ("on", "on_with_insider"):
        cfg = ScenarioConfig(
            confidence=0.01,
            key_length=128,
            attack={"type": "passive_classical"},
            intermediary=modo,
            message={"text": "oi Bob"},
            seed=11,
        )
        r = run_scenario(cfg)
        linhas[modo] = {
            "established": r.report.established,
            "eve_known_fraction": r.report.eve_known_fraction,
        }
    return {"intermediary": linhas}


def demo_intercept() -> dict:
    abortos = 0
    qbers = []
    for seed in DEMO_SEEDS:
        cfg = ScenarioConfig(
            confidence=0.01,
            key_length=256,
            attack={"type": "intercept_resend", "angle_policy": "uniform"},
            seed=seed,
        )
        r = run_scenario(cfg).report
        abortos += not r.established
        if r.aborted_reason == "ChecksumMismatch":
            qbers.append(r.qber)
    esperado = 1.0 - per_round_agreement_under_attack(MeasurementAngle(0.0), AnglePolicy(), default_angle_set())
    return {
        "seeds": len(DEMO_SEEDS),
        "detected": abortos,
        "mean_qber_when_key_phase_ran": float(np.mean(qbers)) if qbers else None,
        "closed_form_qber": esperado,
    }


def demo_rsa_anecdote() -> dict:
    def linha(modelo, anos):
        return {"label": modelo.label, "security_bits": modelo.security_bits, "years": anos}

    eras = rsa_anecdote()
    return {
        "rsa_eras": [linha(m, a) for m, a in eras],
        "supercomputers": [linha(m, a) for m, a in supercomputer_scenario()],
        # Tamanho de parâmetro que cada época quebra em um ano
        "bits_at_risk_in_one_year": {m.label: security_bits_at_risk(m, 1.0) for m, _ in eras},
        "one_day_in_years": 1 / 365.25,
        "log10_first_estimate": math.log10(eras[0][1]),
    }


DEMOS: dict[str, Callable[[], dict]] = {
    "three-pass": demo_three_pass,
    "mitm": demo_mitm,
    "insider": demo_insider,
    "intercept": demo_intercept,
    "rsa-anecdote": demo_rsa_anecdote,
}


def run_demo(name: str) -> dict:
    demo = DEMOS.get(name)
    if demo is None:
        raise UnknownDemo(name)
    logger.info("Executando demonstração '%s'", name)
    return {"demo": name, **demo()}
