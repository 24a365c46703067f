import logging
import os, random, string
from datetime import datetime

import hydra
import pytorch_lightning as pl
from rich import pretty, traceback
from rich.console import Console
from rich.logging import RichHandler

_installed = False


def get_exp_path_and_run_name(output_path, exp_name):
    random_str = ''.join(random.choices(string.ascii_uppercase + string.digits, k=5))
    today = datetime.today().strftime("%Y-%m-%d")
    curr_time = datetime.today().strftime("%H-%M")
    run_name = f"{curr_time}-{exp_name}-{random_str}"
    exp_path = f'{output_path}/{today}/{run_name}'
    return exp_path, run_name


def create_log_dir(exp_path):
    if os.path.exists(exp_path) and os.listdir(exp_path):
        raise FileExistsError(f"Experiment path {exp_path} already exists")
    os.makedirs(exp_path, exist_ok=True)


def exp(output_path, exp_name, exp_path=None):
    """Create the run directory. ``exp_path`` pins it; otherwise ``<output>/<day>/<time>-<name>-<tag>``."""
    if exp_path is None:
        exp_path, run_name = get_exp_path_and_run_name(output_path, exp_name)
        create_log_dir(exp_path)
    else:
        run_name = os.path.basename(os.path.normpath(exp_path))
        os.makedirs(exp_path, exist_ok=True)
    return exp_path, run_name


def seed_everything(seed):
    pl.seed_everything(seed, workers=True)


def setup_logging(level=logging.INFO):
    """Install rich pretty-printing, tracebacks and the log handler once per process."""
    global _installed
    if _installed:
        return
    pretty.install()
    traceback.install(suppress=[hydra, pl])
    logging.basicConfig(level=level, format="%(message)s", datefmt="[%X]",
                        handlers=[RichHandler(console=Console(stderr=True), rich_tracebacks=True, show_path=False)])
    # lightning prints its own banners through these
    for name in ('pytorch_lightning', 'lightning.pytorch', 'lightning_fabric'):
        logging.getLogger(name).setLevel(logging.WARNING)
    _installed = True
