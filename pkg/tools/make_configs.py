#!/usr/bin/env python3
"""
Green Coalitions - Config Generator
===================================

Escribe las configuraciones JSON de los escenarios predefinidos y, con
--traces, una traza CSV de ejemplo por operador a la que apuntan las
configuraciones en lugar de los perfiles sintéticos.

Uso:
    python tools/make_configs.py [directorio] [--traces] [--all-prices]
"""

import sys
from pathlib import Path

# Rutas
PROJECT_ROOT = Path(__file__).parent.parent
OUTPUT_DIR = PROJECT_ROOT / 'configs'

if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from src.core.constants import PRICE_SCENARIOS, UserMix, NUM_OPERATORS  # noqa: E402
from src.core.settings import ScenarioConfig, price_preset, scenario_preset  # noqa: E402
from src.systems.traces import format_trace, synthesize_trace  # noqa: E402

MIXES = (UserMix.HOMOGENEOUS, UserMix.HETEROGENEOUS)


def write_traces(config: ScenarioConfig, trace_dir: Path, seed: int = 1) -> ScenarioConfig:
    """
    Genera la traza de cada operador y la enlaza en la configuración.

    Args:
        config: Escenario con perfiles sintéticos
        trace_dir: Directorio de las trazas
        seed: Semilla base

    Returns:
        La misma configuración con 'trace' en lugar de 'target_mean'
    """
    trace_dir.mkdir(parents=True, exist_ok=True)
    for spec in config.operators:
        path = trace_dir / f"no{spec.id}.csv"
        if not path.exists():
            trace = synthesize_trace(spec.target_mean, seed * 1000 + spec.id, config.period_hours)
            path.write_text(format_trace(trace), encoding='utf-8')
            print(f"  Creado: {path}")
        spec.trace = f"{trace_dir.name}/{path.name}"
        spec.target_mean = None
    return config


def main():
    """Función principal"""
    args = [a for a in sys.argv[1:] if not a.startswith('--')]
    with_traces = '--traces' in sys.argv
    all_prices = '--all-prices' in sys.argv
    out_dir = Path(args[0]) if args else OUTPUT_DIR
    out_dir.mkdir(parents=True, exist_ok=True)

    configs = [scenario_preset(s, mix) for s in PRICE_SCENARIOS for mix in MIXES]
    if all_prices:
        configs += [price_preset(mask, mix) for mask in range(1 << NUM_OPERATORS) for mix in MIXES]

    for config in configs:
        if with_traces:
            write_traces(config, out_dir / 'traces')
        path = config.save(out_dir / f"{config.name}.json")
        print(f"Creado: {path}")

    print(f"\n{len(configs)} configuraciones en {out_dir}")


if __name__ == '__main__':
    main()
