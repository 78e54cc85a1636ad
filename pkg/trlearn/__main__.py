#!/usr/bin/env python

"""Package entry point."""


from trlearn.app import main


if __name__ == "__main__":  # pragma: no cover
    main()
