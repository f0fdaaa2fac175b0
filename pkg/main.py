#!/usr/bin/env python3
"""
u3cubature - Fully symmetric cubature rules for the unit sphere
Features: structure search, moment-system solver, product rules, rule verification
"""

import sys
import os

def main():
    """Launch the u3cubature command-line tool."""
    # Add src to the Python path
    app_dir = os.path.dirname(os.path.abspath(__file__))
    src_dir = os.path.join(app_dir, 'src')
    if src_dir not in sys.path:
        sys.path.insert(0, src_dir)

    try:
        # Import after path setup
        from u3cubature.cli.main import run
    except ImportError as e:
        print(f"❌ Import error: {e}", file=sys.stderr)
        print("💡 Please ensure all dependencies are installed:", file=sys.stderr)
        print("   pip install -r requirements.txt", file=sys.stderr)
        sys.exit(1)

    try:
        sys.exit(run(sys.argv[1:]))
    except KeyboardInterrupt:
        print("\n👋 Interrupted by user", file=sys.stderr)
        sys.exit(130)

if __name__ == "__main__":
    main()
