import sys

from lexfst.cli import main

sys.exit(main())
