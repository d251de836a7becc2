import sys

from tcofdm.cli import main

sys.exit(main())
