from chasing.cli import main

main()
