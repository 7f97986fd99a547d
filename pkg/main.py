import sys

from app import WorkbenchApp


if __name__ == "__main__":
    # app = WorkbenchApp(config_paths=['config/default.yaml', 'config/custom.yaml'])

    app = WorkbenchApp()
    try:
        status = app.run(sys.argv[1:])
    finally:
        app.close()  # Ensures cleanup even on exceptions
    sys.exit(status)
