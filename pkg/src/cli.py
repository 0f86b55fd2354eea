"""
Linha de comando `qkdsim`.

    qkdsim run --config configs/baseline.json [--seed N] [--events out.jsonl] [--summary out.json] [--pad-out pad.bin]
    qkdsim sweep --config configs/intercept.json --param rounds_per_test --values 1,2,4,8,16 --seeds 0..99 --out out.csv
    qkdsim demo three-pass|mitm|insider|intercept|rsa-anecdote
    qkdsim schema

Códigos de saída: 0 sucesso, 2 erro de configuração, 3 sessão abortada (só em `run`).
"""

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from src.application.dto.scenario_schema import ScenarioConfig
from src.application.services.demo_service import DEMOS, run_demo
from src.application.services.otp_service import save_pad
from src.application.services.scenario_service import load_scenario, run_scenario, sweep, validate_scenario
from src.domain.exceptions import ConfigInvalid, UnknownParameter
from src.infrastructure.config import get_settings
from src.infrastructure.logging_config import configure_logging
from src.infrastructure.simulation.transcript import write_events, write_summary

logger = logging.getLogger("qkdsim")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ABORT = 3


def parse_seeds(texto: str) -> list[int]:
    """'A..B' (inclusivo), 'A,B,C' ou um inteiro só."""
    texto = texto.strip()
    if ".." in texto:
        inicio, fim = texto.split("..", 1)
        a, b = int(inicio), int(fim)
        if b < a:
            raise ValueError(f"Intervalo de sementes vazio: {texto}")
        return list(range(a, b + 1))
    return [int(s) for s in texto.split(",") if s.strip()]


def parse_values(texto: str) -> list[float]:
    return [float(v) for v in texto.split(",") if v.strip()]


def _falha_config(mensagens: Sequence[str]) -> int:
    for m in mensagens:
        print(f"erro de configuração: {m}", file=sys.stderr)
    return EXIT_CONFIG


# ==========================================
# SUBCOMANDOS
# ==========================================

def cmd_run(args: argparse.Namespace) -> int:
    cfg = load_scenario(args.config)
    if args.seed is not None:
        cfg = validate_scenario({**cfg.model_dump(mode="json"), "seed": args.seed})

    logger.info("Cenário %s, semente %d", args.config, cfg.seed)
    resultado = run_scenario(cfg)
    if args.events:
        write_events(resultado.transcript, args.events)
    if args.summary:
        write_summary(resultado.summary, args.summary)
    if args.pad_out:
        if resultado.alice_pad is None:
            print("aviso: nenhum pad estabelecido; --pad-out ignorado", file=sys.stderr)
        else:
            save_pad(resultado.alice_pad, args.pad_out)

    print(json.dumps(resultado.summary, indent=2))
    return EXIT_OK if resultado.report.established else EXIT_ABORT


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = load_scenario(args.config)
    try:
        valores = parse_values(args.values)
        sementes = parse_seeds(args.seeds)
    except ValueError as e:
        return _falha_config([str(e)])

    workers = args.workers if args.workers is not None else get_settings().sweep_workers
    df = sweep(cfg, args.param, valores, sementes, workers=workers)
    if args.out:
        df.to_csv(args.out, index=False, lineterminator="\n")
        print(f"✅ {len(df)} linhas gravadas em {args.out}")
    else:
        sys.stdout.write(df.to_csv(index=False, lineterminator="\n"))
    return EXIT_OK


def cmd_demo(args: argparse.Namespace) -> int:
    print(json.dumps(run_demo(args.name), indent=2, ensure_ascii=False))
    return EXIT_OK


def cmd_schema(args: argparse.Namespace) -> int:
    print(json.dumps(ScenarioConfig.model_json_schema(), indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qkdsim",
        description="Simulador determinístico de distribuição quântica de chaves.",
    )
    parser.add_argument("--log-level", default=None, help="Sobrescreve QKDSIM_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="Executa um cenário")
    p_run.add_argument("--config", required=True, help="Arquivo JSON do cenário")
    p_run.add_argument("--seed", type=int, default=None, help="Sobrescreve a semente da configuração")
    p_run.add_argument("--events", default=None, help="Grava o transcript em JSON Lines")
    p_run.add_argument("--summary", default=None, help="Grava o SessionReport em JSON")
    p_run.add_argument("--pad-out", default=None, help="Grava o pad estabelecido de Alice (bytes crus)")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="Varre um parâmetro numérico e grava CSV")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--param", required=True, help="Caminho do campo, ex.: rounds_per_test, attack.fixed_angle")
    p_sweep.add_argument("--values", required=True, help="Lista separada por vírgulas")
    p_sweep.add_argument("--seeds", default="0", help="Intervalo A..B (inclusivo) ou lista")
    p_sweep.add_argument("--out", default=None, help="Arquivo CSV de saída (padrão: stdout)")
    p_sweep.add_argument("--workers", type=int, default=None, help="Processos paralelos (padrão: QKDSIM_SWEEP_WORKERS)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_demo = sub.add_parser("demo", help="Executa uma demonstração pronta")
    p_demo.add_argument("name", choices=sorted(DEMOS))
    p_demo.set_defaults(func=cmd_demo)

    p_schema = sub.add_parser("schema", help="Imprime o JSON Schema da configuração")
    p_schema.set_defaults(func=cmd_schema)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.func(args)
    except ConfigInvalid as e:
        logger.debug("Configuração rejeitada: %d erro(s)", len(e.errors))
        return _falha_config(e.errors)
    except UnknownParameter as e:
        return _falha_config([str(e)])


if __name__ == "__main__":
    sys.exit(main())
