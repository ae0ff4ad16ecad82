import sys

from fishergme.cli import main

sys.exit(main())
