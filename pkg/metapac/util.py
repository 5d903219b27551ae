
#
# Copyright 2026 metapac contributors
# Distributed under the (new) BSD License. See LICENSE.txt for more info.
#

import io
import csv

def numstr(x):
    """Render a number as briefly as it reads back exactly, e.g. 2.0 -> '2', 0.250 -> '0.25'."""
    s = repr(float(x))
    if s.endswith('.0'):
        s = s[:-2]
    return '0' if s == '-0' else s

def fixed4(x):
    """Render a float with the four decimals used in every exported table."""
    return '%.4f' % x

def csv_text(header, rows):
    """Render a header and rows as CSV text with '\\n' line endings."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()

def write_text(outfilename, text):
    with open(outfilename, 'w', newline='', encoding='utf-8') as f:
        f.write(text)

def read_text(infilename):
    with open(infilename, 'r', newline='', encoding='utf-8') as f:
        return f.read()
