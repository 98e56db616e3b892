import sys

from qhl.main import main

sys.exit(main())
