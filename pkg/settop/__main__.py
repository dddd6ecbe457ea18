"""python -m settop"""

from settop.cli import main

main()
