"""
Green Coalitions - Constants
Todas las constantes del simulador centralizadas
"""

# =============================================================================
# BASE STATIONS (escenario experimental de cinco operadores)
# =============================================================================
BS_CAPACITY = 100.0  # Mbps
BS_STATIC_POWER = 0.551  # kW (término estático alpha)
BS_PER_USER_POWER = 0.00146  # kW por usuario (término dinámico beta)
COALITION_COST_RATE = 0.01  # $/hora por operador

NUM_OPERATORS = 5

# =============================================================================
# ENERGY PRICES ($/kWh)
# =============================================================================
ENERGY_PRICE_LO = 0.12
ENERGY_PRICE_HI = 2 * ENERGY_PRICE_LO

# Filas de precios por escenario (NO 1..5)
PRICE_SCENARIOS = {
    1: (ENERGY_PRICE_LO,) * 5,
    2: (ENERGY_PRICE_HI,) * 5,
    3: (ENERGY_PRICE_LO, ENERGY_PRICE_HI, ENERGY_PRICE_HI, ENERGY_PRICE_LO, ENERGY_PRICE_LO),
    4: (ENERGY_PRICE_LO, ENERGY_PRICE_LO, ENERGY_PRICE_LO, ENERGY_PRICE_HI, ENERGY_PRICE_HI),
}

# =============================================================================
# USER CLASSES
# =============================================================================
# (nombre, tasa mínima Mbps, ingreso $/hora)
USER_CLASSES = {
    'base': ('Base', 0.0122, 0.0175),
    'standard': ('Standard', 0.384, 0.035),
    'premium': ('Premium', 10.0, 0.07),
}


class UserMix:
    HOMOGENEOUS = 'homogeneous'  # solo Premium
    HETEROGENEOUS = 'heterogeneous'  # tres clases en partes iguales

# =============================================================================
# LOAD PROFILES
# =============================================================================
WEEK_HOURS = 168.0
DAY_HOURS = 24.0
TRACE_RESOLUTION_HOURS = 0.5
MIN_TRACE_SAMPLES = 4

# Carga horaria media de cada BS (objetivos de los perfiles sintéticos)
LOAD_TARGETS = (0.316, 0.221, 0.143, 0.240, 0.218)

# Discretización: rejilla densa de como mucho un minuto
DENSE_GRID_HOURS = 1.0 / 60.0
MAX_SUBINTERVALS = 10_000

# Generador sintético
SYNTH_MAX_ATTEMPTS = 100
SYNTH_MEAN_TOLERANCE = 0.02
SYNTH_HARMONICS = (0.85, 0.35, 0.12)  # amplitudes: fundamental diaria + 2 armónicos
SYNTH_PHASE_JITTER = 0.35  # radianes (desviación típica por día)
SYNTH_WEEKEND_FACTOR = 0.8

# =============================================================================
# SOLVER
# =============================================================================
DEFAULT_TOLERANCE = 1e-6
MIN_TOLERANCE = 1e-9
MAX_TOLERANCE = 1e-4
FEASIBILITY_TOLERANCE = 1e-6

# Cotas de la enumeración exhaustiva (oráculo)
BRUTEFORCE_MAX_STATIONS = 3
BRUTEFORCE_MAX_USERS = 7

# =============================================================================
# COALITION GAME
# =============================================================================
SHAPLEY_MAX_PLAYERS = 12
STABLE_SET_MAX_PLAYERS = 6
EFFICIENCY_TOLERANCE = 1e-9
MAX_FORMATION_ROUNDS = 1000  # tope de rondas por ejecución


class StableSetStrategy:
    SCHEDULES = 'schedules'  # todos los órdenes de la primera ronda
    EXHAUSTIVE = 'exhaustive'  # todas las particiones (diagnóstico)
    SINGLE = 'single'  # solo el calendario sembrado


class RPMetric:
    RATIO_OF_SUMS = 'ratio-of-sums'
    LITERAL = 'literal'


class SolveStatus:
    OPTIMAL = 'optimal'
    INFEASIBLE = 'infeasible'  # inalcanzable: apagar todo siempre es admisible


# =============================================================================
# OUTPUT FILES
# =============================================================================
METRICS_FILE = 'metrics.csv'
STEPS_FILE = 'steps.jsonl'
SHIFTS_FILE = 'shifts.jsonl'
PROFILES_FILE = 'profiles.csv'
CONFIG_FILE = 'config.json'
PLOTDATA_DIR = 'plotdata'
RP_VS_DT_FILE = 'rp_vs_dt.csv'

TRACE_HEADER = ('time_hours', 'load')
