import csv
from dataclasses import dataclass, field
import logging
import math
import os
from typing import List, Optional

from omegaconf import OmegaConf
import yaml

from pl_rffp.errors import RffpError

log = logging.getLogger(__name__)


def config_echo(run):
    return OmegaConf.to_container(OmegaConf.structured(run.exp), resolve=True)


def _cell(value):
    if isinstance(value, float):
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return repr(value)
    return value


@dataclass
class ExperimentReport:
    name: str
    config: dict
    rows: List[dict] = field(default_factory=list)
    seeds: List[int] = field(default_factory=list)
    digests: List[str] = field(default_factory=list)
    wall_clock_s: Optional[float] = None

    def columns(self):
        columns = []
        for row in self.rows:
            columns += [k for k in row if k not in columns]
        return columns

    def check_unique(self, keys):
        """Every scenario, identified by ``keys``, must appear exactly once."""
        seen = set()
        for row in self.rows:
            ident = tuple(row.get(k) for k in keys)
            if ident in seen:
                raise RffpError(f"{self.name}: scenario {dict(zip(keys, ident))} reported twice")
            seen.add(ident)

    def summary(self, record_timing=False):
        summary = {
            'experiment': self.name,
            'seeds': list(self.seeds),
            'digests': sorted(set(self.digests)),
            'rows': [dict(row) for row in self.rows],
            'config': self.config,
        }
        if record_timing and self.wall_clock_s is not None:
            summary['wall_clock_s'] = self.wall_clock_s
        return summary

    def write(self, out_dir, record_timing=False):
        os.makedirs(out_dir, exist_ok=True)
        csv_path = os.path.join(out_dir, f"{self.name}.csv")
        with open(csv_path, 'w', newline='') as f:
            writer = csv.DictWriter(f, fieldnames=self.columns(), restval='')
            writer.writeheader()
            for row in self.rows:
                writer.writerow({k: _cell(v) for k, v in row.items()})
        yaml_path = os.path.join(out_dir, f"{self.name}.yaml")
        with open(yaml_path, 'w') as f:
            yaml.safe_dump(self.summary(record_timing), f, sort_keys=False)
        log.info(f"wrote {csv_path} and {yaml_path}")
        return csv_path, yaml_path
