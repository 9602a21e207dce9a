import sys

from cliquemis.cli import main

sys.exit(main())
