import csv
import io
import json
import logging
from pathlib import Path
from typing import List, Optional, Tuple

import click

from app.core.interval import ExactOrInterval
from app.core.rational_io import format_float, format_rational, format_value, value_to_json
from app.schemas import SampleBatch, SuiteReport

logger = logging.getLogger(__name__)


class ExportService:
    """Machine-readable renderings of command results; nothing here is time-dependent"""

    @staticmethod
    def pmf_table(rows: List[Tuple[int, object, object]], format: str = 'csv', show_float: bool = False) -> str:
        """Rows (i, pmf, cdf) as CSV `i,pmf,cdf` or a JSON list"""
        if format == 'json':
            data = [
                {"i": i, "pmf": format_rational(pmf), "cdf": format_rational(cdf)}
                for i, pmf, cdf in rows
            ]
            return json.dumps(data, indent=2) + "\n"

        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["i", "pmf", "cdf"] + (["pmf_float", "cdf_float"] if show_float else []))
        for i, pmf, cdf in rows:
            row = [i, format_rational(pmf), format_rational(cdf)]
            if show_float:
                row += [format_float(pmf), format_float(cdf)]
            writer.writerow(row)
        return buffer.getvalue()

    @staticmethod
    def sample_batch(batch: SampleBatch) -> str:
        """One draw per line, then the JSON footer on its own line"""
        lines = [str(draw) for draw in batch.draws]
        lines.append(json.dumps(batch.footer(), sort_keys=True))
        return "\n".join(lines) + "\n"

    @staticmethod
    def poly_value(
        family: str,
        n: int,
        lam,
        x,
        value: ExactOrInterval,
        format: str = 'text',
        show_float: bool = False,
    ) -> str:
        """
        Single evaluation. text prints the bare value; csv prints the row
        family,n,lambda,x,value; json prints the same fields as an object.
        """
        lam_text = "" if lam is None else format_rational(lam)
        if format == 'json':
            data = {
                "family": family,
                "n": n,
                "lambda": lam_text or None,
                "x": format_rational(x),
                "value": value_to_json(value),
            }
            if show_float:
                data["float"] = format_float(value)
            return json.dumps(data, indent=2) + "\n"
        if format == 'csv':
            buffer = io.StringIO()
            writer = csv.writer(buffer, lineterminator="\n")
            writer.writerow(["family", "n", "lambda", "x", "value"] + (["float"] if show_float else []))
            writer.writerow(
                [family, n, lam_text, format_rational(x), format_value(value)]
                + ([format_float(value)] if show_float else [])
            )
            return buffer.getvalue()
        text = format_value(value)
        if show_float:
            text += f" {format_float(value)}"
        return text + "\n"

    @staticmethod
    def suite_report(report: SuiteReport) -> str:
        return report.to_json() + "\n"

    @staticmethod
    def write(content: str, output: Optional[str]) -> None:
        """Write to a file, or to standard output when no path is given"""
        if output is None:
            click.echo(content, nl=False)
            return
        path = Path(output)
        path.write_text(content, encoding='utf-8')
        logger.info(f"Wrote {len(content)} bytes to {path}")
