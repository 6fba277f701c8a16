import sys

from apbez.cli import main

sys.exit(main())
