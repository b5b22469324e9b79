import sys

from rswplots import main

sys.exit(main())
