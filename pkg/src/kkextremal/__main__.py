import sys

from kkextremal.cli import main

sys.exit(main())
