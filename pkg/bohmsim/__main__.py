import sys

from bohmsim.main import main

sys.exit(main())
