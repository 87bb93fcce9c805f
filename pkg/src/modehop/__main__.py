import sys

from modehop.cli import main

sys.exit(main())
