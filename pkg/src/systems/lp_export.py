"""
Green Coalitions - LP Export
Escribe una instancia de asignación en formato LP de texto plano

Permite contrastar el solver interno con cualquier solver MILP externo.
El producto b_i * W_i(sum u) se linealiza como alpha*E*b_i + beta*E*sum u,
exacto gracias a las filas explícitas u_ij <= b_i.
"""

import logging
from pathlib import Path
from typing import Union

from .allocation import AllocationInstance

logger = logging.getLogger(__name__)

LP_EXTENSION = '.lp'


def _num(value: float) -> str:
    return format(value, '.17g')


def _term(coef: float, var: str) -> str:
    sign = '-' if coef < 0 else '+'
    return f"{sign} {_num(abs(coef))} {var}"


def export_milp_text(inst: AllocationInstance) -> str:
    """
    Genera el texto LP de la instancia.

    Además de las restricciones del modelo se añade, por usuario, una
    binaria z_j "sin servicio" que solo puede valer 1 si todas las BSs
    están apagadas; así apagar todo es admisible igual que en el solver.

    Args:
        inst: Instancia de asignación

    Returns:
        Texto en formato LP
    """
    stations = inst.stations
    users = inst.users
    big_u = inst.big_U

    objective = []
    for bs in stations:
        objective.append(_term(bs.static_cost_rate, f"b_{bs.id}"))
        for j, user in enumerate(users):
            objective.append(_term(bs.per_user_cost_rate, f"u_{bs.id}_{j}"))
            objective.append(_term(-user.revenue_rate / user.min_rate, f"d_{bs.id}_{j}"))

    total_revenue = sum(u.revenue_rate for u in users)
    if total_revenue > 0:
        objective.append(_term(total_revenue, "k_const"))

    lines = [
        "\\ Asignación de usuarios a BSs de una coalición",
        f"\\ {len(stations)} BSs, {len(users)} usuarios",
        "Minimize",
        " obj: " + " ".join(objective),
        "Subject To",
    ]

    for bs in stations:
        if users:
            row = " ".join(_term(1.0, f"d_{bs.id}_{j}") for j in range(len(users)))
            lines.append(f" cap_{bs.id}: {row} <= {_num(bs.capacity)}")

    for j in range(len(users)):
        row = " ".join(_term(1.0, f"u_{bs.id}_{j}") for bs in stations)
        lines.append(f" one_{j}: {row} + 1 z_{j} = 1")

    for bs in stations:
        if users:
            row = " ".join(_term(1.0, f"u_{bs.id}_{j}") for j in range(len(users)))
            lines.append(f" on_{bs.id}: {row} - {big_u} b_{bs.id} <= 0")

    for bs in stations:
        for j, user in enumerate(users):
            lines.append(
                f" rate_{bs.id}_{j}: + 1 d_{bs.id}_{j} - {_num(user.min_rate)} u_{bs.id}_{j} <= 0"
            )
            lines.append(f" link_{bs.id}_{j}: + 1 u_{bs.id}_{j} - 1 b_{bs.id} <= 0")
            lines.append(f" off_{j}_{bs.id}: + 1 z_{j} + 1 b_{bs.id} <= 1")

    lines.append("Bounds")
    for bs in stations:
        for j in range(len(users)):
            lines.append(f" 0 <= d_{bs.id}_{j}")
    if total_revenue > 0:
        lines.append(" k_const = 1")

    binaries = [f"b_{bs.id}" for bs in stations]
    binaries += [f"u_{bs.id}_{j}" for bs in stations for j in range(len(users))]
    binaries += [f"z_{j}" for j in range(len(users))]
    lines.append("Binaries")
    lines.append(" " + " ".join(binaries))
    lines.append("End")
    return "\n".join(lines) + "\n"


def write_lp(inst: AllocationInstance, path: Union[str, Path]) -> Path:
    """
    Guarda la instancia en un archivo .lp.

    Returns:
        Ruta escrita (con extensión .lp)
    """
    path = Path(path)
    if path.suffix != LP_EXTENSION:
        path = path.with_suffix(LP_EXTENSION)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(export_milp_text(inst), encoding='utf-8')
    logger.info("Instancia exportada a %s", path)
    return path
