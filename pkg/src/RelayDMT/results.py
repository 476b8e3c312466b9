"""Result tables and their CSV / JSON renderings

Every output starts with a metadata block holding the resolved run config, so
a result file can be re-run as is. In CSV the block is a run of `# key: value`
comment lines; tables follow, each a header row plus data rows, separated by
one blank line. Column order per mode:

    analytic  curve:      r, cf_dmt, outer_bound_d1, outer_bound_d2, df_symmetric_dmt
              df_region:  d, r1, r2
              threshold:  df_threshold
    simulate  outage:     snr_db, message, trials, failures, p_hat, stderr
              fit:        message, d_hat, stderr, points_used
    optimize  curve:      r, dcf_dmt, full_duplex_dmt[, fixed_listen_dmt]
    region    constraints: a, b, c
              boundary:    r1, r2

JSON carries the same tables as lists of records keyed by column name.
"""

from __future__ import annotations
import csv
import io
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import TYPE_CHECKING, Any, Optional, TextIO, Union

from .errors import ConfigError

if TYPE_CHECKING:
    from .config import RunConfig

CONFIG_PREFIX = "# config: "
GENERATED_PREFIX = "# generated_at: "


@dataclass
class Table:
    name: str
    columns: tuple[str, ...]
    rows: list[tuple[Any, ...]] = field(default_factory=list)

    def add(self, *values: Any):
        if len(values) != len(self.columns):
            raise ValueError(f"{self.name} expects {len(self.columns)} values, got {len(values)}")
        self.rows.append(values)

    def records(self) -> list[dict[str, Any]]:
        return [dict(zip(self.columns, row)) for row in self.rows]


def metadata(config: RunConfig) -> dict[str, Any]:
    meta: dict[str, Any] = {"config": config.to_document()}
    if config.timestamp:
        meta["generated_at"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return meta


def render_csv(meta: dict[str, Any], tables: list[Table]) -> str:
    buf = io.StringIO()
    buf.write(CONFIG_PREFIX + json.dumps(meta["config"], separators=(",", ":")) + "\n")
    if "generated_at" in meta:
        buf.write(GENERATED_PREFIX + meta["generated_at"] + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    for idx, table in enumerate(tables):
        if idx:
            buf.write("\n")
        writer.writerow(table.columns)
        writer.writerows(table.rows)
    return buf.getvalue()


def render_json(meta: dict[str, Any], tables: list[Table]) -> str:
    doc = {"metadata": meta, "tables": {t.name: t.records() for t in tables}}
    return json.dumps(doc, indent=2) + "\n"


def write_results(
    config: RunConfig, tables: list[Table], stream: Optional[TextIO] = None
) -> str:
    """Render the tables in the configured format, to `config.output_path` or `stream`"""
    meta = metadata(config)
    if config.output_format.value == "json":
        text = render_json(meta, tables)
    else:
        text = render_csv(meta, tables)
    if config.output_path is not None:
        Path(config.output_path).write_text(text)
    elif stream is not None:
        stream.write(text)
    return text


def read_metadata(path: Union[str, Path]) -> RunConfig:
    """Recover the run config stored in a result file"""
    from .config import parse_config

    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return parse_config(json.loads(text)["metadata"]["config"])
    for line in text.splitlines():
        if line.startswith(CONFIG_PREFIX):
            return parse_config(line[len(CONFIG_PREFIX) :])
    raise ConfigError(f"no config metadata found in {path}")
