"""
Green Coalitions - Profile Manager
Carga y caché de los perfiles de carga (trazas CSV y perfiles sintéticos)
"""

import logging
import threading
from pathlib import Path
from typing import Optional, Union

from ..core.constants import WEEK_HOURS
from ..core.errors import TraceError
from ..systems.traces import (
    LoadProfile, LoadStats, fit_periodic_spline, parse_trace,
    stats, synthesize_profile
)

logger = logging.getLogger(__name__)


class ProfileManager:
    """
    Singleton para la gestión de perfiles de carga.
    Ajusta cada traza una sola vez y reutiliza el spline entre escenarios.
    """

    _instance: Optional['ProfileManager'] = None

    def __new__(cls):
        """Implementación del patrón Singleton"""
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        """Inicializa el manager si no está inicializado"""
        if self._initialized:
            return

        self._initialized = True

        # Cachés: clave -> perfil / estadísticas
        self._profiles: dict[tuple, LoadProfile] = {}
        self._stats: dict[LoadProfile, LoadStats] = {}
        self._lock = threading.Lock()

    def load_trace(self, path: Union[str, Path], period: float = WEEK_HOURS) -> LoadProfile:
        """
        Lee una traza CSV y la ajusta con un spline periódico.

        Args:
            path: Ruta al CSV
            period: Periodo de la traza en horas

        Returns:
            LoadProfile (cacheado por ruta y periodo)
        """
        path = Path(path)
        key = ('trace', str(path.resolve()), period)
        with self._lock:
            if key in self._profiles:
                return self._profiles[key]

        if not path.exists():
            raise TraceError(f"no se encontró la traza: {path}")
        with open(path, 'r', encoding='utf-8') as f:
            try:
                trace = parse_trace(f, period)
            except TraceError as e:
                raise TraceError(f"{path.name}: {e}") from e

        profile = fit_periodic_spline(trace)
        logger.info("Traza cargada: %s (%d muestras)", path.name, len(trace.times))
        with self._lock:
            return self._profiles.setdefault(key, profile)

    def synthetic(self, target_mean: float, seed: int, period: float = WEEK_HOURS) -> LoadProfile:
        """
        Obtiene el perfil sintético de media target_mean (generándolo si hace falta).
        """
        key = ('synthetic', target_mean, seed, period)
        with self._lock:
            if key in self._profiles:
                return self._profiles[key]

        profile = synthesize_profile(target_mean, seed, period)
        with self._lock:
            return self._profiles.setdefault(key, profile)

    def get_stats(self, profile: LoadProfile) -> LoadStats:
        """Carga total y media horaria del perfil (cacheadas)"""
        with self._lock:
            cached = self._stats.get(profile)
        if cached is None:
            cached = stats(profile)
            with self._lock:
                self._stats[profile] = cached
        return cached

    def clear_cache(self):
        """Limpia toda la caché de perfiles"""
        with self._lock:
            self._profiles.clear()
            self._stats.clear()

    def get_cache_info(self) -> dict:
        """Retorna estadísticas de perfiles cargados"""
        with self._lock:
            return {
                'traces': sum(1 for k in self._profiles if k[0] == 'trace'),
                'synthetic': sum(1 for k in self._profiles if k[0] == 'synthetic'),
                'stats': len(self._stats)
            }


# Función de conveniencia para obtener el singleton
def get_profile_manager() -> ProfileManager:
    """Obtiene la instancia del ProfileManager"""
    return ProfileManager()
