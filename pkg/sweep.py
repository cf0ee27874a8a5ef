import sys

from almreg import main_cli

if __name__ == '__main__':
    exit_code = main_cli()

    # Re-render a stored report:
    # python sweep.py report outputs/sparse_sweep/version_0/sweep_report.json

    sys.exit(exit_code)
