import sys

from radcount.main import main

sys.exit(main())
