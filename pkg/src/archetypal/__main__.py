import sys

from archetypal.cli import main

sys.exit(main())
