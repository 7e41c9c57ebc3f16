from plabic_workbench.main import main


if __name__ == "__main__":
    exit(main())
