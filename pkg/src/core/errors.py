"""
Green Coalitions - Errors
Jerarquía de excepciones del simulador
"""

from typing import Optional


class SimulationError(Exception):
    """Error base de todo el simulador"""


class ConfigError(SimulationError, ValueError):
    """Configuración de escenario inválida"""


class TraceError(SimulationError, ValueError):
    """Traza de carga mal formada o fuera de rango"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"línea {line}: {message}"
        super().__init__(message)


class DomainError(SimulationError, ValueError):
    """Argumento fuera del dominio de una fórmula"""


class AllocationError(SimulationError, ValueError):
    """Instancia de asignación mal formada o demasiado grande"""


class GameError(SimulationError, ValueError):
    """Límite excedido en el juego de coaliciones"""


class UndefinedBaselineError(SimulationError, ZeroDivisionError):
    """El beneficio en solitario de un paso es cero y RP no está definido"""

    def __init__(self, step: Optional[int] = None):
        self.step = step
        where = "en todo el horizonte" if step is None else f"en el paso {step}"
        super().__init__(f"beneficio base nulo {where}")
