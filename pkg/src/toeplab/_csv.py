"""Shared CSV formatting: every float is printed with 17 significant digits."""

import csv
import io


def fmt(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value + 0.0, ".17g")  # + 0.0 turns -0.0 into 0.0
    return str(value)


def write_rows(stream, header, rows):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])


def rows_to_text(header, rows):
    buf = io.StringIO()
    write_rows(buf, header, rows)
    return buf.getvalue()
