import sys

from load_forecasting.core.cli import main

if __name__ == '__main__':
    sys.exit(main())
