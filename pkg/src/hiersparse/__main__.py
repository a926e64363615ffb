import sys
from hiersparse.cli import main
sys.exit(main())
