# -*- coding: utf-8 -*-

""" Entry point for ``python -m tmspy``. """

if __name__ == '__main__':  # pragma: no cover
    from tmspy.cli import main
    raise SystemExit(main())
