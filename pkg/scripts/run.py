"""Entry point for every command, e.g.

    python scripts/run.py command=params exp.model.architecture=adsb-real-2x
    python scripts/run.py command=experiment exp=full exp.experiment=noise-aug
"""
from pl_rffp.cli import main

if __name__ == "__main__":
    main()
