"""
Report rendering: aligned text, CSV and JSON
"""

import csv
import io

from django.db import models

CSV_HEADER = ['method', 'direction', 'partial', 'correction', 'value', 'clamped']


class OutputFormat(models.TextChoices):
    TEXT = 'text', 'Aligned text'
    CSV = 'csv', 'CSV'
    JSON = 'json', 'JSON'


def _fixed(value):
    return f'{value:.6f}'


def render_text(document, show_clamped=False):
    meta = document.metadata
    lines = [
        f'Bounds on P(X >= {meta.r})  n={meta.n}  depth={meta.depth}  r={meta.r}  k={meta.k}  '
        f'digest={meta.digest}',
        '  '.join(f'S_{j}={_fixed(s)}' for j, s in enumerate(meta.s_values, start=1)),
    ]
    if meta.labeling is not None:
        lines.append(f'labeling: {meta.labeling}')
    lines.append('')

    verdicts = document.exact.verdicts if document.exact else None
    header = f'{"method":<20} {"direction":<9} {"partial":>10} {"correction":>10} {"value":>10}'
    if show_clamped:
        header += f' {"clamped":>10}'
    if verdicts is not None:
        header += f' {"verdict":>7}'
    lines.append(header)
    lines.append('-' * len(header))

    for row in document.rows:
        line = (
            f'{row.method:<20} {row.direction:<9} {_fixed(row.partial):>10} '
            f'{_fixed(row.correction):>10} {_fixed(row.value):>10}'
        )
        if show_clamped:
            line += f' {_fixed(row.clamped):>10}'
        if verdicts is not None:
            line += f' {"pass" if verdicts.get(row.method) else "FAIL":>7}'
        if row.labeling_note:
            line += f'  ({row.labeling_note})'
        lines.append(line)

    if document.companion is not None:
        companion = document.companion
        line = f'companion: classical k={companion.k} {companion.direction} {_fixed(companion.value)}'
        if verdicts is not None and 'companion' in verdicts:
            line += f' {"pass" if verdicts["companion"] else "FAIL"}'
        lines.append(line)

    if document.exact is not None:
        lines.append(
            f'exact: P(X >= {meta.r}) = {_fixed(document.exact.value)}  '
            f'remainder = {_fixed(document.exact.remainder)}'
        )

    if document.failures:
        lines.append('failures:')
        lines.extend(f'  {failure.method}: {failure.message}' for failure in document.failures)

    if document.notes:
        lines.append('notes:')
        lines.extend(f'  {note}' for note in document.notes)

    return '\n'.join(lines) + '\n'


def render_csv(document):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(CSV_HEADER)
    for row in document.rows:
        writer.writerow([
            row.method,
            row.direction,
            repr(row.partial),
            repr(row.correction),
            repr(row.value),
            repr(row.clamped),
        ])
    return buffer.getvalue()


def render_json(document):
    return document.model_dump_json(indent=2) + '\n'


def render(document, output_format=OutputFormat.TEXT, show_clamped=False):
    if output_format == OutputFormat.CSV:
        return render_csv(document)
    if output_format == OutputFormat.JSON:
        return render_json(document)
    return render_text(document, show_clamped=show_clamped)
