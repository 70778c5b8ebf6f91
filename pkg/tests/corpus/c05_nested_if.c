int main()
{
    int x;
    int y;
    int s = 0;
    if (x >= 0) {
        if (y >= 0) s = 1; else s = 2;
    } else {
        if (y < x) s = 3; else s = 4;
    }
    MYASSERT(s >= 1);
    return 0;
}
