import sys

from logmaj.cli import main

sys.exit(main())
