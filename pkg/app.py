from src.pipline.cli import main

# python app.py reeb --c1 "sin(x)" --c2 "sin(x)+1" --window -7 7 --format dot
if __name__ == "__main__":
    main()
