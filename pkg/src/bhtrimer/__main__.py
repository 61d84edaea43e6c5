from bhtrimer.cli import main
import sys

sys.exit(main())
