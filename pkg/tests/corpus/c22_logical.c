int main()
{
    int x;
    int y;
    int r = 0;
    if (x > 0 && y > 0) {
        r = 1;
    }
    if (x < -3 || y == 2) {
        r = r + 2;
    }
    r = !r;
    return 0;
}
