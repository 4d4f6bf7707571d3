#!/usr/bin/env python3
"""
Green Coalitions - RP Plot
==========================

Dibuja la serie RP frente a dt (plotdata/rp_vs_dt.csv) como imagen PNG,
una línea por operador.

Uso:
    python tools/plot_rp.py results/plotdata/rp_vs_dt.csv [salida.png]
"""

import csv
import sys
from pathlib import Path

from PIL import Image, ImageDraw, ImageFont


# Lienzo
WIDTH, HEIGHT = 800, 500
MARGIN_LEFT, MARGIN_RIGHT = 70, 120
MARGIN_TOP, MARGIN_BOTTOM = 40, 60

BACKGROUND = (255, 255, 255)
AXIS_COLOR = (40, 40, 40)
GRID_COLOR = (225, 225, 225)

# Un color por operador (se repiten si hay más)
SERIES_COLORS = [
    (31, 119, 180), (255, 127, 14), (44, 160, 44),
    (214, 39, 40), (148, 103, 189), (140, 86, 75)
]


def read_series(path: Path) -> dict[int, list[tuple[float, float]]]:
    """
    Lee el CSV dt,no,rp.

    Returns:
        Diccionario operador -> puntos (dt, rp) ordenados por dt
    """
    series: dict[int, list[tuple[float, float]]] = {}
    with open(path, 'r', encoding='utf-8', newline='') as f:
        for row in csv.DictReader(f):
            series.setdefault(int(row['no']), []).append((float(row['dt']), float(row['rp'])))
    for points in series.values():
        points.sort()
    return series


def render(series: dict[int, list[tuple[float, float]]]) -> Image.Image:
    """
    Dibuja el gráfico.

    Args:
        series: Puntos por operador

    Returns:
        Imagen PIL
    """
    image = Image.new('RGB', (WIDTH, HEIGHT), BACKGROUND)
    draw = ImageDraw.Draw(image)
    font = ImageFont.load_default()

    xs = [x for points in series.values() for x, _ in points]
    ys = [y for points in series.values() for _, y in points]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(min(ys), 0.0), max(ys)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def to_pixel(x: float, y: float) -> tuple[float, float]:
        px = MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w
        py = MARGIN_TOP + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h
        return px, py

    # Rejilla horizontal y etiquetas del eje Y
    for k in range(6):
        y = y_lo + (y_hi - y_lo) * k / 5
        _, py = to_pixel(x_lo, y)
        draw.line([(MARGIN_LEFT, py), (WIDTH - MARGIN_RIGHT, py)], fill=GRID_COLOR)
        draw.text((8, py - 6), f"{y:.3f}", fill=AXIS_COLOR, font=font)

    # Ejes
    draw.line([(MARGIN_LEFT, MARGIN_TOP), (MARGIN_LEFT, HEIGHT - MARGIN_BOTTOM)], fill=AXIS_COLOR)
    draw.line([(MARGIN_LEFT, HEIGHT - MARGIN_BOTTOM), (WIDTH - MARGIN_RIGHT, HEIGHT - MARGIN_BOTTOM)],
              fill=AXIS_COLOR)
    for x in sorted(set(xs)):
        px, _ = to_pixel(x, y_lo)
        draw.text((px - 6, HEIGHT - MARGIN_BOTTOM + 8), f"{x:g}", fill=AXIS_COLOR, font=font)
    draw.text((WIDTH // 2 - 40, HEIGHT - 25), "dt (horas)", fill=AXIS_COLOR, font=font)
    draw.text((MARGIN_LEFT, 12), "RP por operador", fill=AXIS_COLOR, font=font)

    # Líneas y leyenda
    for index, (no, points) in enumerate(sorted(series.items())):
        color = SERIES_COLORS[index % len(SERIES_COLORS)]
        pixels = [to_pixel(x, y) for x, y in points]
        if len(pixels) > 1:
            draw.line(pixels, fill=color, width=2)
        for px, py in pixels:
            draw.ellipse([px - 3, py - 3, px + 3, py + 3], fill=color)

        legend_y = MARGIN_TOP + 18 * index
        draw.line([(WIDTH - MARGIN_RIGHT + 15, legend_y + 6), (WIDTH - MARGIN_RIGHT + 35, legend_y + 6)],
                  fill=color, width=2)
        draw.text((WIDTH - MARGIN_RIGHT + 40, legend_y), f"NO {no}", fill=AXIS_COLOR, font=font)

    return image


def main():
    """Función principal"""
    if len(sys.argv) < 2:
        print("Uso: python tools/plot_rp.py <rp_vs_dt.csv> [salida.png]")
        sys.exit(1)

    source = Path(sys.argv[1])
    target = Path(sys.argv[2]) if len(sys.argv) > 2 else source.with_suffix('.png')

    series = read_series(source)
    if not series:
        print(f"{source} no contiene datos")
        sys.exit(1)

    render(series).save(target)
    print(f"Creado: {target}")


if __name__ == '__main__':
    main()
