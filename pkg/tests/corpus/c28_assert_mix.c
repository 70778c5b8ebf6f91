int main()
{
    int x;
    int y = 5;
    if (x > 0) y = x;
    MYASSERT(y > 0);
    MYASSERT(y < 0);
    MYASSERT(x > 0);
    return 0;
}
