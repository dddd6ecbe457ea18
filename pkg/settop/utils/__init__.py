"""
Utility modules shared by the settop commands and the acceptance runner.
"""
