from .config import RunConfig, Sweep, build_config, dump_config, parse_config
from .emit import bundle_json, emit, load_bundle, table_csv
from .run import ResultBundle, Table, run

__all__ = [
    "RunConfig", "Sweep", "build_config", "dump_config", "parse_config",
    "bundle_json", "emit", "load_bundle", "table_csv",
    "ResultBundle", "Table", "run",
]
