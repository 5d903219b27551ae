
#
# Copyright 2026 metapac contributors
# Distributed under the (new) BSD License. See LICENSE.txt for more info.
#

"""Standalone SVG charts of exported curve and sweep CSVs.

A sorted curve (rank,score / rank,time / rank,compute) is drawn as one
series.  A sweep table is drawn with one series per metric column, each
scaled to its own range, which the legend states.  A summary CSV may
be given as baseline: its System 1 and System 2 rows then appear as
dotted and dashed reference lines across a sorted curve.

"""

import io
import csv
import logging
import xml.etree.ElementTree as ET

from .util import numstr, read_text, write_text

logger = logging.getLogger(__name__)

SVG_NS = 'http://www.w3.org/2000/svg'

WIDTH = 640
HEIGHT = 400
MARGIN = 50

COLORS = ('#2ca02c', '#9467bd', '#ff7f0e', '#8c564b', '#17becf')

# header -> x column; every other column is a series
CURVE_SCHEMAS = {
    ('rank', 'score'): 'rank',
    ('rank', 'time'): 'rank',
    ('rank', 'compute'): 'rank',
    ('param', 'win_rate', 'avg_time', 'avg_score', 'avg_compute'): 'param',
}

SUMMARY_HEADER = ('system', 'win_rate', 'avg_time', 'avg_score', 'avg_compute', 's1_fraction')

# summary column holding the mean of a sorted curve's value column
BASELINE_COLUMNS = {'score': 'avg_score', 'time': 'avg_time', 'compute': 'avg_compute'}

# System 1 mean blue dashed, System 2 mean red dotted
SYSTEM1_STYLE = ('System 1', '8,4', '#1f77b4')
SYSTEM2_STYLE = ('System 2', '2,4', '#d62728')

# summary row labels -> (legend, stroke-dasharray, stroke)
BASELINE_SYSTEMS = {
    'always-s1': SYSTEM1_STYLE,
    'System 1': SYSTEM1_STYLE,
    'always-s2': SYSTEM2_STYLE,
    'System 2': SYSTEM2_STYLE,
}

PLOT_KINDS = ('line', 'scatter')

class SchemaMismatchError (ValueError):
    pass

def _csv_rows(text):
    return [row for row in csv.reader(io.StringIO(text)) if row]

def read_curve(text):
    """Parse curve or sweep CSV text into (header, numeric rows)."""
    rows = _csv_rows(text)
    if not rows:
        raise SchemaMismatchError('CSV is empty')
    header = tuple(rows[0])
    if header not in CURVE_SCHEMAS:
        raise SchemaMismatchError('CSV header %s is not a plottable schema' % ','.join(header))
    if len(rows) < 2:
        raise SchemaMismatchError('CSV has a header but no data rows')
    data = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise SchemaMismatchError('line %d has %d fields, expected %d' % (lineno, len(row), len(header)))
        try:
            data.append([float(v) for v in row])
        except ValueError:
            raise SchemaMismatchError('line %d is not numeric: %s' % (lineno, ','.join(row)))
    return header, data

def read_baselines(text, column):
    """Return [(legend, value, dasharray, stroke), ...] from summary CSV text."""
    rows = _csv_rows(text)
    if not rows or tuple(rows[0]) != SUMMARY_HEADER:
        raise SchemaMismatchError('baseline is not a summary CSV')
    index = SUMMARY_HEADER.index(BASELINE_COLUMNS[column])
    baselines = []
    for row in rows[1:]:
        if row[0] in BASELINE_SYSTEMS:
            legend, dashes, stroke = BASELINE_SYSTEMS[row[0]]
            try:
                baselines.append((legend, float(row[index]), dashes, stroke))
            except (ValueError, IndexError):
                raise SchemaMismatchError('baseline row %s is malformed' % ','.join(row))
    return baselines

class _Scale (object):
    def __init__(self, lo, hi, out_lo, out_hi):
        if hi == lo:
            lo, hi = lo - 1, hi + 1
        self.lo, self.hi = lo, hi
        self.out_lo, self.out_hi = out_lo, out_hi

    def __call__(self, v):
        return self.out_lo + (v - self.lo) * (self.out_hi - self.out_lo) / (self.hi - self.lo)

def _fmt(v):
    return '%.2f' % v

def _sub(parent, tag, text=None, **attrs):
    el = ET.SubElement(parent, tag, {k.replace('_', '-'): str(v) for k, v in attrs.items()})
    if text is not None:
        el.text = text
    return el

def render_svg(header, data, kind='line', baselines=(), title=None):
    """Render parsed CSV data as SVG text.

       Arguments:
         header, data: as returned by read_curve()
         kind: 'line' draws one polyline per series, 'scatter' circles
         baselines: [(legend, value, dasharray, stroke), ...] reference lines,
           only meaningful for single-series curves
         title: optional chart title
    """
    if kind not in PLOT_KINDS:
        raise ValueError('unknown plot kind %r, expected one of %s' % (kind, ', '.join(PLOT_KINDS)))
    xcol = CURVE_SCHEMAS[header]
    xi = header.index(xcol)
    series = [(i, name) for i, name in enumerate(header) if i != xi]
    xs = [row[xi] for row in data]

    left, right = MARGIN, WIDTH - MARGIN
    top, bottom = MARGIN, HEIGHT - MARGIN
    xscale = _Scale(min(xs), max(xs), left, right)

    svg = ET.Element('svg', {
        'xmlns': SVG_NS,
        'width': str(WIDTH),
        'height': str(HEIGHT),
        'viewBox': '0 0 %d %d' % (WIDTH, HEIGHT),
    })
    if title:
        _sub(svg, 'text', title, x=WIDTH // 2, y=MARGIN // 2, text_anchor='middle')

    _sub(svg, 'line', x1=left, y1=bottom, x2=right, y2=bottom, stroke='black', **{'class': 'axis'})
    _sub(svg, 'line', x1=left, y1=bottom, x2=left, y2=top, stroke='black', **{'class': 'axis'})
    _sub(svg, 'text', xcol, x=(left + right) // 2, y=HEIGHT - 10, text_anchor='middle')
    _sub(svg, 'text', numstr(xscale.lo), x=left, y=bottom + 15, text_anchor='middle')
    _sub(svg, 'text', numstr(xscale.hi), x=right, y=bottom + 15, text_anchor='middle')

    single = len(series) == 1
    for n, (i, name) in enumerate(series):
        ys = [row[i] for row in data]
        lo, hi = min(ys), max(ys)
        if single:
            for legend, value, dashes, stroke in baselines:
                lo, hi = min(lo, value), max(hi, value)
        yscale = _Scale(lo, hi, bottom, top)
        color = COLORS[n % len(COLORS)]
        points = [(xscale(x), yscale(y)) for x, y in zip(xs, ys)]

        if kind == 'line':
            _sub(
                svg, 'polyline',
                points=' '.join('%s,%s' % (_fmt(px), _fmt(py)) for px, py in points),
                fill='none', stroke=color, **{'class': 'series', 'data-column': name}
            )
        else:
            group = _sub(svg, 'g', fill=color, **{'class': 'series', 'data-column': name})
            for px, py in points:
                _sub(group, 'circle', cx=_fmt(px), cy=_fmt(py), r=2)

        if single:
            _sub(svg, 'text', name, x=15, y=(top + bottom) // 2, text_anchor='middle')
            _sub(svg, 'text', numstr(yscale.lo), x=left - 5, y=bottom, text_anchor='end')
            _sub(svg, 'text', numstr(yscale.hi), x=left - 5, y=top, text_anchor='end')
            for legend, value, dashes, stroke in baselines:
                y = _fmt(yscale(value))
                _sub(
                    svg, 'line', x1=left, y1=y, x2=right, y2=y, stroke=stroke,
                    stroke_dasharray=dashes, **{'class': 'baseline'}
                )
                _sub(svg, 'text', '%s mean' % legend, x=right, y=y, text_anchor='end', fill=stroke)
        else:
            _sub(
                svg, 'text', '%s [%s, %s]' % (name, numstr(lo), numstr(hi)),
                x=right, y=top + 15 * n, text_anchor='end', fill=color
            )

    return ET.tostring(svg, encoding='unicode')

def plot_csv(infilename, outfilename, kind='line', baseline=None, title=None):
    """Read a curve or sweep CSV and write its SVG chart.

       baseline names a summary CSV whose System 1 and System 2 rows
       become reference lines; it is ignored for sweep tables.
    """
    header, data = read_curve(read_text(infilename))
    baselines = ()
    if baseline is not None:
        if CURVE_SCHEMAS[header] == 'rank':
            baselines = read_baselines(read_text(baseline), header[1])
        else:
            logger.warning('baseline %s ignored for a sweep table', baseline)
    write_text(outfilename, render_svg(header, data, kind, baselines, title))
    logger.info('wrote %s with %d points', outfilename, len(data))
