import sys

from normtorus.cli import main

sys.exit(main())
