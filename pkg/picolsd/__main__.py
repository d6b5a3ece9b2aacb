#!/bin/python

if __name__ == "__main__":
    from picolsd import main

    main()
