import sys
from finslerfield.cli import main

sys.exit(main())
